/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#ifndef WINEX_WINEX_HPP
#define WINEX_WINEX_HPP

#include "winex/aggregator.hpp"
#include "winex/boundedness.hpp"
#include "winex/error.hpp"
#include "winex/expand.hpp"
#include "winex/ksla.hpp"
#include "winex/ksla_json.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/letter.hpp"
#include "winex/predicate.hpp"
#include "winex/predicate_text.hpp"
#include "winex/processor.hpp"
#include "winex/rational.hpp"
#include "winex/smso.hpp"
#include "winex/smso_compile.hpp"
#include "winex/sre.hpp"
#include "winex/theory.hpp"
#include "winex/window_expression.hpp"

#endif // WINEX_WINEX_HPP
