#include "buchi/errors.hpp"
#include "buchi/guard.hpp"

#include <doctest.h>

#include <functional>
#include <vector>

using buchi::Guard;
using buchi::Letter;

namespace {

const std::vector<std::string> kAtoms{"b", "c"};

bool eval_on(const std::string& text, std::set<std::string> letter) {
    return buchi::eval_guard(Guard::parse(text), letter, kAtoms);
}

} // namespace

TEST_CASE("guard evaluation on letters") {
    CHECK(eval_on("b & !c", {"b"}));
    CHECK_FALSE(eval_on("b & !c", {"b", "c"}));
    CHECK(eval_on("t", {}));
    CHECK_FALSE(eval_on("f", {"b", "c"}));
    CHECK(eval_on("!(b | c)", {}));
    CHECK(eval_on("b | c & f", {"b"}));
    CHECK_FALSE(eval_on("(b | c) & f", {"b"}));
    CHECK(eval_on("!!b", {"b"}));
}

TEST_CASE("guard precedence: negation binds tighter than conjunction, conjunction tighter than disjunction") {
    // Brute force against the same formula written with explicit parentheses.
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"!b & c", "(!b) & c"},
        {"b | c & !b", "b | (c & (!b))"},
        {"!b | !c & b", "(!b) | ((!c) & b)"},
    };
    for (const auto& [loose, explicit_form] : pairs)
        for (int mask = 0; mask < 4; ++mask) {
            std::set<std::string> letter;
            if (mask & 1) letter.insert("b");
            if (mask & 2) letter.insert("c");
            CHECK(eval_on(loose, letter) == eval_on(explicit_form, letter));
        }
}

TEST_CASE("unknown atoms are rejected") {
    CHECK_THROWS_AS(buchi::eval_guard(Guard::parse("d"), {}, kAtoms), buchi::UnknownAtom);
    CHECK_THROWS_AS(buchi::eval_guard(Guard::parse("b"), {"zz"}, kAtoms), buchi::UnknownAtom);
    try {
        (void)Guard::parse("b & q").bind(kAtoms);
        FAIL("expected UnknownAtom");
    } catch (const buchi::UnknownAtom& e) {
        CHECK(e.name() == "q");
    }
}

TEST_CASE("syntax errors carry a deterministic column") {
    const auto column_of = [](const std::string& text) -> std::size_t {
        try {
            (void)Guard::parse(text);
        } catch (const buchi::SyntaxError& e) {
            CHECK(e.line() == 1);
            return e.column();
        }
        return 0;
    };
    CHECK(column_of("b &") == 4);
    CHECK(column_of("(b | c") == 7);
    CHECK(column_of("b $ c") == 3);
    CHECK(column_of("") == 1);
    CHECK(column_of("b c") == 3);
    CHECK(column_of("b &") == column_of("b &"));
}

TEST_CASE("names and satisfying letters") {
    const Guard g = Guard::parse("c & !b | c").bind(kAtoms);
    CHECK(g.names() == std::vector<std::string>{"c", "b"});
    const auto sat = g.satisfying_letter(2);
    REQUIRE(sat);
    CHECK(g.eval(*sat));
    CHECK_FALSE(Guard::parse("b & !b").bind(kAtoms).satisfying_letter(2));
    CHECK(buchi::format_letter(Letter{true, true}, kAtoms) == "{b,c}");
    CHECK(buchi::format_letter(Letter{false, false}, kAtoms) == "{}");
}

TEST_CASE("combinators agree with pointwise boolean logic") {
    const Guard b = Guard::parse("b").bind(kAtoms);
    const Guard c = Guard::parse("c").bind(kAtoms);
    for (int mask = 0; mask < 4; ++mask) {
        const Letter l{(mask & 1) != 0, (mask & 2) != 0};
        CHECK((b && !c).eval(l) == (l[0] && !l[1]));
        CHECK((b || c).eval(l) == (l[0] || l[1]));
        CHECK((!(b || c)).eval(l) == !(l[0] || l[1]));
    }
}
