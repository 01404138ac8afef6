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

#ifndef WINEX_SRE_HPP
#define WINEX_SRE_HPP

// Symbolic regular expression syntax:
//
//   sre     := concat ("+" concat)*          union
//   concat  := postfix ("." postfix)*        k-concatenation (overlap of k letters)
//   postfix := primary "*"*
//   primary := "[" predicate "]" | "(" sre ")"

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "winex/error.hpp"
#include "winex/ksla.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/predicate_text.hpp"
#include "winex/scanner.hpp"
#include "winex/theory.hpp"

namespace winex {

class Sre {
public:
    enum class Kind { Pred, Union, Concat, Star };

    static Sre pred(const Theory& t, Predicate p) {
        t.validate(p);
        return Sre(t, std::make_shared<const Node>(Node{Kind::Pred, std::move(p), {}}));
    }
    static Sre union_of(const Sre& a, const Sre& b) { return binary(Kind::Union, a, b); }
    static Sre concat(const Sre& a, const Sre& b) { return binary(Kind::Concat, a, b); }
    static Sre star(const Sre& a) {
        return Sre(a.theory_, std::make_shared<const Node>(Node{Kind::Star, Predicate::top(), {a.node_}}));
    }

    Kind kind() const noexcept { return node_->kind; }
    const Predicate& predicate() const { return node_->pred; }
    Sre child(std::size_t i) const { return Sre(theory_, node_->kids.at(i)); }
    const Theory& theory() const noexcept { return theory_; }

    friend bool operator==(const Sre& a, const Sre& b) { return same(*a.node_, *b.node_); }

private:
    struct Node {
        Kind kind;
        Predicate pred;
        std::vector<std::shared_ptr<const Node>> kids;
    };

    Sre(Theory t, std::shared_ptr<const Node> n) : theory_(std::move(t)), node_(std::move(n)) {}

    static Sre binary(Kind k, const Sre& a, const Sre& b) {
        if (!(a.theory_ == b.theory_)) throw TheoryMismatch("expressions over different theories");
        return Sre(a.theory_, std::make_shared<const Node>(Node{k, Predicate::top(), {a.node_, b.node_}}));
    }

    static bool same(const Node& a, const Node& b) {
        if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
        if (a.kind == Kind::Pred) return a.pred == b.pred;
        for (std::size_t i = 0; i < a.kids.size(); ++i)
            if (!same(*a.kids[i], *b.kids[i])) return false;
        return true;
    }

    Theory theory_;
    std::shared_ptr<const Node> node_;
};

namespace detail {

class SreParser {
public:
    SreParser(Scanner& s, const Theory& t) : s_(s), t_(t) {}

    Sre parse_union() {
        Sre r = parse_concat();
        while (s_.accept("+")) r = Sre::union_of(r, parse_concat());
        return r;
    }

private:
    Sre parse_concat() {
        Sre r = parse_postfix();
        while (s_.accept(".")) r = Sre::concat(r, parse_postfix());
        return r;
    }

    Sre parse_postfix() {
        Sre r = parse_primary();
        while (s_.accept("*")) r = Sre::star(r);
        return r;
    }

    Sre parse_primary() {
        if (s_.accept("(")) {
            Sre r = parse_union();
            s_.expect(")");
            return r;
        }
        if (s_.peek() != '[') s_.fail("expected '[' or '('");
        std::size_t open = s_.pos();
        s_.accept("[");
        std::size_t at = s_.pos();
        Predicate p = parse_predicate(s_);
        if (!s_.accept("]")) s_.fail(s_.at_end() ? "unclosed '[' opened at offset " + std::to_string(open) : "expected ']'");
        try {
            return Sre::pred(t_, p);
        } catch (const TheoryMismatch& e) {
            s_.skip_ws();
            throw TheoryMismatch(std::string(e.what()) + " (predicate at offset " + std::to_string(at) + ")");
        }
    }

    Scanner& s_;
    const Theory& t_;
};

inline void print_sre(const Sre& r, std::string& out) {
    auto sub = [&](const Sre& c, bool parens) {
        if (parens) out += "(";
        print_sre(c, out);
        if (parens) out += ")";
    };
    switch (r.kind()) {
    case Sre::Kind::Pred:
        out += "[" + to_text(r.predicate()) + "]";
        return;
    case Sre::Kind::Union:
        sub(r.child(0), false);
        out += " + ";
        sub(r.child(1), r.child(1).kind() == Sre::Kind::Union);
        return;
    case Sre::Kind::Concat:
        sub(r.child(0), r.child(0).kind() == Sre::Kind::Union);
        out += " . ";
        sub(r.child(1), r.child(1).kind() == Sre::Kind::Union || r.child(1).kind() == Sre::Kind::Concat);
        return;
    case Sre::Kind::Star: {
        Sre c = r.child(0);
        sub(c, c.kind() != Sre::Kind::Pred && c.kind() != Sre::Kind::Star);
        out += "*";
        return;
    }
    }
}

} // namespace detail

inline Sre parse_sre(std::string_view text, const Theory& t) {
    Scanner s(text);
    Sre r = detail::SreParser(s, t).parse_union();
    if (!s.at_end()) s.fail("unexpected trailing input");
    return r;
}

inline std::string to_text(const Sre& r) {
    std::string out;
    detail::print_sre(r, out);
    return out;
}

/// Direct recursive evaluation of the denotation; independent of the automaton compiler.
class SreMembership {
public:
    SreMembership(const Sre& r, std::span<const Letter> w) : w_(w), k_(r.theory().lookback()) { root_ = r; }

    bool operator()() { return member(root_, 0, w_.size()); }

private:
    bool member(const Sre& r, std::size_t i, std::size_t j) {
        const std::size_t n = j - i;
        auto key = std::tuple(static_cast<const void*>(&r.predicate()), i, j);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool result = false;
        switch (r.kind()) {
        case Sre::Kind::Pred:
            result = n == k_ + 1 && eval(r.predicate(), w_.subspan(i, n));
            break;
        case Sre::Kind::Union:
            result = member(r.child(0), i, j) || member(r.child(1), i, j);
            break;
        case Sre::Kind::Concat:
            for (std::size_t m = k_; m <= n && !result; ++m)
                result = member(r.child(0), i, i + m) && member(r.child(1), i + m - k_, j);
            break;
        case Sre::Kind::Star:
            if (n == k_) {
                result = true;
                break;
            }
            for (std::size_t m = k_ + 1; m <= n && !result; ++m)
                result = member(r.child(0), i, i + m) && member(r, i + m - k_, j);
            break;
        }
        memo_[key] = result;
        return result;
    }

    std::span<const Letter> w_;
    std::size_t k_;
    Sre root_ = Sre::pred(Theory::dense(0), Predicate::top());
    std::map<std::tuple<const void*, std::size_t, std::size_t>, bool> memo_;
};

inline bool sre_membership(const Sre& r, std::span<const Letter> w) {
    if (w.size() < r.theory().lookback()) return false;
    return SreMembership(r, w)();
}

inline Ksla compile_sre(const Sre& r) {
    switch (r.kind()) {
    case Sre::Kind::Pred: return single_predicate(r.theory(), r.predicate());
    case Sre::Kind::Union: return unite(compile_sre(r.child(0)), compile_sre(r.child(1)));
    case Sre::Kind::Concat: return concat_k(compile_sre(r.child(0)), compile_sre(r.child(1)));
    case Sre::Kind::Star: return star(compile_sre(r.child(0)));
    }
    return empty_language(r.theory());
}

} // namespace winex

#endif // WINEX_SRE_HPP
