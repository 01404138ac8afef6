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

// Window expressions and boundedness triples shared by the test binaries.

#ifndef WINEX_TESTS_CORPUS_HPP
#define WINEX_TESTS_CORPUS_HPP

#include <string>
#include <vector>

#include "winex/boundedness.hpp"
#include "winex/sre.hpp"
#include "winex/window_expression.hpp"

namespace corpus {

using namespace winex;

inline const Theory& ab0() {
    static const Theory t = Theory::finite({"a", "b"}, 0);
    return t;
}
inline const Theory& ab1() {
    static const Theory t = Theory::finite({"a", "b"}, 1);
    return t;
}

inline WindowExpression expression(const Theory& t, std::vector<std::pair<const char*, const char*>> pairs) {
    WindowExpression e(t);
    for (const auto& [pa, wa] : pairs) {
        WindowPair p = compile_sre_pair(pa, wa, t);
        e.add(std::move(p.prefix), std::move(p.window));
    }
    return e;
}

struct Named {
    std::string name;
    WindowExpression expr;
};

/// Expressions over {a,b} for exhaustive processor checks.
inline std::vector<Named> finite_expressions() {
    return {
        {"a*b after anything", expression(ab0(), {{"([x0 in{a}] + [x0 in{b}])*", "[x0 in{a}]* . [x0 in{b}]"}})},
        {"single letters", expression(ab0(), {{"[true]*", "[x0 in{a}]"}})},
        {"two pairs",
         expression(ab0(), {{"[true]* . [x0 in{b}]", "[x0 in{a}]*"},
                            {"[true]*", "[x0 in{b}] . [x0 in{a}]* . [x0 in{b}]"}})},
        {"after ab blocks", expression(ab0(), {{"([x0 in{a}] . [x0 in{b}])*", "[x0 in{a}] + [x0 in{b}] . [x0 in{b}]*"}})},
        {"repeated letters k=1", expression(ab1(), {{"[true]*", "[x0 = x-1] . [x0 = x-1]*"}})},
    };
}

inline std::vector<Named> dense_expressions() {
    const Theory d1 = Theory::dense(1), d2 = Theory::dense(2);
    return {
        {"stock", expression(d1, {{"[true]*", "[x0 > x-1]"}})},
        {"rising runs", expression(d1, {{"[true]*", "[x0 > x-1]*"}})},
        {"peaks", expression(d2, {{"[true]*", "[x-1 >= x-2 && x-1 >= x0 && x-1 >= 3]"}})},
        {"dips then climb",
         expression(d1, {{"[true]* . [x0 < x-1]", "[x0 <= x-1]* . [x0 > x-1]"}, {"[true]*", "[x0 = x-1]* . [x0 > 2]"}})},
    };
}

} // namespace corpus

#endif // WINEX_TESTS_CORPUS_HPP
