#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace cantor;
using testing_support::make_rng;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

std::string fixture(const std::string& name) { return std::string(CANTOR_FIXTURES) + "/" + name; }

template <class Reader>
std::size_t error_line(Reader read, const std::string& text) {
    std::istringstream in(text);
    try {
        read(in);
    } catch (const ParseError& e) {
        return e.line();
    }
    ADD_FAILURE() << "no ParseError for:\n" << text;
    return 0;
}

auto measure_reader = [](std::istream& in) { return io::read_measure(in); };
auto functional_reader = [](std::istream& in) { return io::read_functional(in); };
auto test_reader = [](std::istream& in) { return io::read_test(in); };
auto enum_reader = [](std::istream& in) { return io::read_enumeration(in); };

} // namespace

TEST(MeasureFile, RoundTrip) {
    const auto measures = testing_support::exact_measures();
    for (int trial = 0; trial < 30; ++trial) {
        const auto& [name, mu] = measures[trial % measures.size()];
        const auto a = CylinderAssignment::truncate(mu, 1 + trial % 6);
        std::ostringstream out;
        io::write_measure(out, a, {"from " + name});
        std::istringstream in(out.str());
        const auto back = io::read_measure(in);
        ASSERT_EQ(back, a) << name;
        std::ostringstream again;
        io::write_measure(again, back, {"from " + name});
        ASSERT_EQ(again.str(), out.str());
    }
}

TEST(MeasureFile, Fixture) {
    std::ifstream in(fixture("measure_skewed.txt"));
    const auto a = io::read_measure(in);
    EXPECT_EQ(a.at(bs("0")), Rational(3, 4));
    EXPECT_EQ(a.to_oracle().value(bs("000")), Rational(1, 4));
}

TEST(MeasureFile, ErrorsCarryLineNumbers) {
    const std::string head = "measure v1\ndepth: 1\nextension: uniform\n";
    EXPECT_EQ(error_line(measure_reader, "measure v2\n"), 1u);
    EXPECT_EQ(error_line(measure_reader, head + "@ 1\n0 1/2\n1 1/3\n"), 4u); // additivity at the parent
    EXPECT_EQ(error_line(measure_reader, head + "@ 1\n0 1/x\n1 1/2\n"), 5u);
    EXPECT_EQ(error_line(measure_reader, head + "@ 1\n0 1/2\n0 1/2\n"), 6u);
    EXPECT_EQ(error_line(measure_reader, head + "@ 1\n0 1/2\n10 1/2\n"), 6u);
    EXPECT_EQ(error_line(measure_reader, head + "@ 1\n0 1/2\n"), 5u);
    EXPECT_EQ(error_line(measure_reader, "measure v1\ndepth: 1\nextension: sideways\n"), 3u);
    EXPECT_EQ(error_line(measure_reader, head + "@ 1\n0 3/2\n1 -1/2\n"), 5u);

    std::ifstream bad(fixture("measure_bad_additivity.txt"));
    try {
        io::read_measure(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(FunctionalFile, RoundTrip) {
    auto rng = make_rng(113);
    for (int trial = 0; trial < 20; ++trial) {
        const auto phi = testing_support::random_functional(rng, 1 + trial % 3, 2);
        std::ostringstream out;
        io::write_functional(out, phi);
        std::istringstream in(out.str());
        ASSERT_EQ(io::read_functional(in), phi);
    }
    std::ifstream in(fixture("functional_xor.txt"));
    EXPECT_EQ(io::read_functional(in), functionals::pairwise_xor(2));
}

TEST(FunctionalFile, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line(functional_reader, "functional v1\nuse: u(2)=1\n"), 2u);
    EXPECT_EQ(error_line(functional_reader, "functional v1\nuse: u(1)=1\n0 -> 0\n1 => 1\n"), 4u);
    // 10 maps outside the extension of 1's output.
    EXPECT_EQ(error_line(functional_reader, "functional v1\nuse: u(1)=1,u(2)=2\n0 -> 0\n1 -> 1\n"
                                            "00 -> 00\n01 -> 01\n10 -> 00\n11 -> 11\n"),
              7u);
    EXPECT_EQ(error_line(functional_reader, "functional v1\nuse: u(1)=1\n0 -> 0\n0 -> 1\n"), 4u);
}

TEST(TestFile, RoundTrip) {
    auto rng = make_rng(117);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<TestLevel> levels;
        for (unsigned n = 0; n < 1u + trial % 4; ++n) {
            levels.push_back({n, testing_support::random_set(rng, rng() % 5, 6)});
        }
        const MLTest t(levels);
        std::ostringstream out;
        io::write_test(out, t);
        std::istringstream in(out.str());
        ASSERT_EQ(io::read_test(in), t) << out.str();
    }
}

TEST(TestFile, Errors) {
    EXPECT_EQ(error_line(test_reader, "mltest v1\nlevel 0: @\nlevel 2: 0\n"), 3u);
    EXPECT_EQ(error_line(test_reader, "mltest v1\n# note\nlevel 0: 0,, 1\n"), 3u);
    EXPECT_EQ(error_line(test_reader, "mltest v1\nlevel 0 0\n"), 2u);
    EXPECT_EQ(error_line(test_reader, "mltest v1\nlevel 0: 0a\n"), 2u);
}

TEST(EnumerationFile, RoundTripAndErrors) {
    const StageEnumeration e({{4, 1}, {0, 3}, {7, 9}});
    std::ostringstream out;
    io::write_enumeration(out, e);
    std::istringstream in(out.str());
    EXPECT_EQ(io::read_enumeration(in).events(), e.events());

    EXPECT_EQ(error_line(enum_reader, "enum v1\n1 3\n2 3\n"), 3u);
    EXPECT_EQ(error_line(enum_reader, "enum v1\n1 3\n1 4\n"), 3u);
    EXPECT_EQ(error_line(enum_reader, "enum v1\n1\n"), 2u);
    EXPECT_EQ(error_line(enum_reader, "enum v1\n1 x\n"), 2u);
}

TEST(BasisFiles, ReadFixtures) {
    std::ifstream tree_in(fixture("basis_a_tree.txt"));
    std::ifstream family_in(fixture("basis_a_family.txt"));
    const auto tree = io::read_tree(tree_in);
    const auto family = io::read_family(family_in);
    EXPECT_EQ(tree.size(), 6u);
    EXPECT_EQ(family.size(), 12u);
    EXPECT_EQ(family.at({1, bs("10")}), (std::set<BitString>{bs("001"), bs("1")}));

    std::istringstream dup("family v1\n@ level 0: 0\n@ level 0: 1\n");
    EXPECT_THROW(io::read_family(dup), ParseError);
    std::istringstream dup_tree("tree v1\n@\n0\n0\n");
    EXPECT_THROW(io::read_tree(dup_tree), ParseError);
}
