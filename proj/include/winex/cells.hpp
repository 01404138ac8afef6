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

#ifndef WINEX_CELLS_HPP
#define WINEX_CELLS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "winex/letter.hpp"
#include "winex/predicate.hpp"
#include "winex/rational.hpp"

namespace winex::detail {

/// Rational constants compared against in any of the predicates.
inline std::vector<Rational> constants_of(std::span<const Predicate> ps) {
    std::set<Rational> out;
    for (const auto& p : ps)
        for_each_atom(p, [&](const Atom& atom) {
            if (const auto* c = std::get_if<CompareAtom>(&atom))
                for (const Operand* o : {&c->lhs, &c->rhs})
                    if (const auto* r = std::get_if<Rational>(o)) out.insert(*r);
        });
    return {out.begin(), out.end()};
}

/// Distinct atoms of the predicates in first-occurrence order.
inline std::vector<Atom> atoms_of(std::span<const Predicate> ps) {
    std::vector<Atom> out;
    for (const auto& p : ps)
        for_each_atom(p, [&](const Atom& a) {
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        });
    return out;
}

/// One window per order type of x-k..x0 relative to the constants, times every track
/// assignment of the current letter. Order comparisons against these constants cannot
/// tell two windows of the same type apart. Returns nullopt past `limit` windows.
inline std::optional<std::vector<std::vector<Letter>>> order_cells(std::size_t k, unsigned tracks,
                                                                   std::vector<Rational> constants,
                                                                   std::size_t limit) {
    std::sort(constants.begin(), constants.end());
    constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
    const std::size_t vars = k + 1;
    std::vector<Rational> cuts;
    cuts.push_back(constants.empty() ? Rational(0) : Rational(constants.front() - 1));
    cuts.insert(cuts.end(), constants.begin(), constants.end());
    cuts.push_back(constants.empty() ? Rational(1) : Rational(constants.back() + 1));
    std::vector<Rational> domain;
    for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
        if (g > 0) domain.push_back(cuts[g]);
        for (std::size_t i = 1; i <= vars; ++i)
            domain.push_back(cuts[g] + (cuts[g + 1] - cuts[g]) * Rational(static_cast<long long>(i),
                                                                          static_cast<long long>(vars + 1)));
    }
    double raw = 1;
    for (std::size_t i = 0; i < vars; ++i) raw *= static_cast<double>(domain.size());
    if (raw * static_cast<double>(std::size_t{1} << tracks) > static_cast<double>(limit) * 64) return std::nullopt;

    auto sign = [](const Rational& a, const Rational& b) -> std::int8_t { return a < b ? -1 : (b < a ? 1 : 0); };
    std::set<std::vector<std::int8_t>> seen;
    std::vector<std::vector<Rational>> types;
    std::vector<std::size_t> idx(vars, 0);
    while (true) {
        std::vector<Rational> vals(vars);
        for (std::size_t i = 0; i < vars; ++i) vals[i] = domain[idx[i]];
        std::vector<std::int8_t> sig;
        for (std::size_t i = 0; i < vars; ++i) {
            for (std::size_t j = i + 1; j < vars; ++j) sig.push_back(sign(vals[i], vals[j]));
            for (const auto& c : constants) sig.push_back(sign(vals[i], c));
        }
        if (seen.insert(sig).second) types.push_back(std::move(vals));
        std::size_t i = 0;
        while (i < vars && ++idx[i] == domain.size()) idx[i++] = 0;
        if (i == vars) break;
    }
    const std::size_t combos = std::size_t{1} << tracks;
    if (types.size() * combos > limit) return std::nullopt;
    std::vector<std::vector<Letter>> out;
    out.reserve(types.size() * combos);
    for (std::uint32_t bits = 0; bits < combos; ++bits)
        for (const auto& vals : types) {
            std::vector<Letter> w;
            for (const auto& v : vals) w.emplace_back(v);
            w.back() = w.back().with_tracks(bits);
            out.push_back(std::move(w));
        }
    return out;
}

/// Truth values of the atoms on a window.
inline std::vector<char> atom_vector(const std::vector<Atom>& atoms, std::span<const Letter> w) {
    std::vector<char> v(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) v[i] = eval_atom(atoms[i], w) ? 1 : 0;
    return v;
}

inline Predicate literal(const Atom& a, bool positive) {
    if (positive) return Predicate::atom(a);
    if (const auto* c = std::get_if<CompareAtom>(&a)) return Predicate::compare(c->lhs, negate(c->op), c->rhs);
    return make_not(Predicate::atom(a));
}

/// Small sum of products over the atoms that is true on every `on` vector and false on
/// every `off` vector; vectors in neither set are free.
inline Predicate cover(const std::vector<Atom>& atoms, const std::set<std::vector<char>>& on,
                       const std::set<std::vector<char>>& off) {
    if (on.empty()) return Predicate::bottom();
    if (off.empty()) return Predicate::top();
    constexpr char any = 2;
    auto inside = [](const std::vector<char>& cube, const std::vector<char>& v) {
        for (std::size_t i = 0; i < cube.size(); ++i)
            if (cube[i] != any && cube[i] != v[i]) return false;
        return true;
    };
    std::set<std::vector<char>> cubes;
    for (const auto& v : on) {
        std::vector<char> cube = v;
        for (std::size_t i = 0; i < cube.size(); ++i) {
            char keep = cube[i];
            cube[i] = any;
            for (const auto& o : off)
                if (inside(cube, o)) {
                    cube[i] = keep;
                    break;
                }
        }
        cubes.insert(std::move(cube));
    }
    std::set<std::vector<char>> uncovered = on;
    std::vector<std::vector<char>> chosen;
    while (!uncovered.empty()) {
        const std::vector<char>* best = nullptr;
        std::size_t best_n = 0;
        for (const auto& c : cubes) {
            std::size_t n = 0;
            for (const auto& v : uncovered) n += inside(c, v);
            if (n > best_n) {
                best_n = n;
                best = &c;
            }
        }
        chosen.push_back(*best);
        for (auto it = uncovered.begin(); it != uncovered.end();) it = inside(*best, *it) ? uncovered.erase(it) : ++it;
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<Predicate> terms;
    for (const auto& c : chosen) {
        std::vector<Predicate> lits;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != any) lits.push_back(literal(atoms[i], c[i] != 0));
        terms.push_back(make_and(lits));
    }
    return make_or(terms);
}

} // namespace winex::detail

#endif // WINEX_CELLS_HPP
