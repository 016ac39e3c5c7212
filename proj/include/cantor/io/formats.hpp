#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/rational.hpp"
#include "cantor/measures/assignment.hpp"
#include "cantor/mltests.hpp"
#include "cantor/settling.hpp"
#include "cantor/transforms/functional.hpp"

// Line-oriented text formats. Blank lines and lines starting with '#' are
// skipped everywhere; every error carries the 1-based line number.
namespace cantor::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next meaningful line, trimmed.
    bool next(std::string& line) {
        while (std::getline(in_, raw_)) {
            ++number_;
            const auto t = trim(raw_);
            if (t.empty() || t.front() == '#') {
                continue;
            }
            line.assign(t);
            return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return number_; }

    void expect_header(std::string_view header) {
        std::string line;
        if (!next(line)) {
            throw ParseError(number_, "empty input, expected '" + std::string(header) + "'");
        }
        if (line != header) {
            throw ParseError(number_, "expected header '" + std::string(header) + "', found '" + line + "'");
        }
    }

    /// "key: value"; returns value.
    std::string expect_field(std::string_view key) {
        std::string line;
        if (!next(line)) {
            throw ParseError(number_, "missing '" + std::string(key) + ":' line");
        }
        const std::string prefix = std::string(key) + ":";
        if (line.rfind(prefix, 0) != 0) {
            throw ParseError(number_, "expected '" + prefix + "', found '" + line + "'");
        }
        return std::string(trim(std::string_view(line).substr(prefix.size())));
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(number_, what); }

private:
    std::istream& in_;
    std::string raw_;
    std::size_t number_ = 0;
};

/// Converts a FormatError raised while parsing a token into a ParseError.
template <typename F>
auto at_line(const LineReader& r, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const FormatError& e) {
        r.fail(e.what());
    } catch (const PreconditionError& e) {
        r.fail(e.what());
    }
}

inline unsigned parse_unsigned(const LineReader& r, std::string_view s, const char* what) {
    if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string_view::npos) {
        r.fail(std::string("invalid ") + what + " '" + std::string(s) + "'");
    }
    return static_cast<unsigned>(std::stoul(std::string(s)));
}

inline std::uint64_t parse_u64(const LineReader& r, std::string_view s, const char* what) {
    if (s.empty() || s.size() > 18 || s.find_first_not_of("0123456789") != std::string_view::npos) {
        r.fail(std::string("invalid ") + what + " '" + std::string(s) + "'");
    }
    return std::stoull(std::string(s));
}

inline BitString parse_bits(const LineReader& r, std::string_view s) {
    return at_line(r, [&] { return BitString::parse(s); });
}

/// "s1, s2, ..." possibly empty.
inline std::set<BitString> parse_string_list(const LineReader& r, std::string_view s) {
    std::set<BitString> out;
    if (trim(s).empty()) {
        return out;
    }
    for (auto item : split(s, ',')) {
        if (item.empty()) {
            r.fail("empty item in string list");
        }
        out.insert(parse_bits(r, item));
    }
    return out;
}

inline void write_string_list(std::ostream& out, const std::set<BitString>& strings) {
    bool first = true;
    for (const auto& s : strings) {
        out << (first ? " " : ", ") << s.display();
        first = false;
    }
}

} // namespace detail

// ---- measure v1 -----------------------------------------------------------

inline CylinderAssignment read_measure(std::istream& in) {
    detail::LineReader r(in);
    r.expect_header("measure v1");
    const unsigned depth = detail::parse_unsigned(r, r.expect_field("depth"), "depth");
    if (depth >= 24) {
        r.fail("depth " + std::to_string(depth) + " too large for a measure file");
    }
    const ExtensionPolicy ext = detail::at_line(r, [&] { return parse_extension_policy(r.expect_field("extension")); });
    std::vector<std::optional<Rational>> values(CylinderAssignment::node_count(depth));
    std::map<BitString, std::size_t> line_of;
    std::string line;
    while (r.next(line)) {
        const auto w = detail::words(line);
        if (w.size() != 2) {
            r.fail("expected '<bits> <rational>', found '" + line + "'");
        }
        const BitString sigma = detail::parse_bits(r, w[0]);
        if (sigma.size() > depth) {
            r.fail("string " + sigma.display() + " is longer than depth " + std::to_string(depth));
        }
        auto& slot = values[CylinderAssignment::slot(sigma)];
        if (slot) {
            r.fail("duplicate entry for " + sigma.display());
        }
        slot = detail::at_line(r, [&] { return Rational::parse(w[1]); });
        line_of[sigma] = r.line();
    }
    std::vector<Rational> dense;
    dense.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!values[k]) {
            std::size_t len = 0;
            while ((std::size_t{2} << len) - 1 <= k) {
                ++len;
            }
            const BitString missing = BitString::from_index(k - ((std::size_t{1} << len) - 1), len);
            throw ParseError(r.line(), "missing entry for " + missing.display());
        }
        dense.push_back(*values[k]);
    }
    try {
        return CylinderAssignment(depth, ext, std::move(dense));
    } catch (const InvalidAssignment& e) {
        throw ParseError(line_of.at(e.sigma()), e.what());
    }
}

/// Comment lines are written after the header as "# <text>".
inline void write_measure(std::ostream& out, const CylinderAssignment& a, const std::vector<std::string>& comments = {}) {
    out << "measure v1\n";
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    out << "depth: " << a.depth() << '\n';
    out << "extension: " << to_string(a.extension()) << '\n';
    for (unsigned len = 0; len <= a.depth(); ++len) {
        for (const auto& s : strings_of_length(len)) {
            out << s.display() << ' ' << a.at(s) << '\n';
        }
    }
}

// ---- functional v1 --------------------------------------------------------

inline MonotoneFunctional read_functional(std::istream& in) {
    detail::LineReader r(in);
    r.expect_header("functional v1");
    const std::string use_line = r.expect_field("use");
    const std::size_t use_line_no = r.line();
    std::vector<unsigned> use;
    if (!detail::trim(use_line).empty()) {
        for (auto item : detail::split(use_line, ',')) {
            const std::string expected = "u(" + std::to_string(use.size() + 1) + ")=";
            if (item.rfind(expected, 0) != 0) {
                r.fail("expected '" + expected + "...' in use line, found '" + std::string(item) + "'");
            }
            use.push_back(detail::parse_unsigned(r, item.substr(expected.size()), "use bound"));
        }
    }
    std::map<BitString, BitString> table;
    std::map<BitString, std::size_t> line_of;
    std::string line;
    while (r.next(line)) {
        const auto w = detail::words(line);
        if (w.size() != 3 || w[1] != "->") {
            r.fail("expected '<input> -> <output>', found '" + line + "'");
        }
        const BitString input = detail::parse_bits(r, w[0]);
        if (table.contains(input)) {
            r.fail("duplicate entry for input " + input.display());
        }
        table.emplace(input, detail::parse_bits(r, w[2]));
        line_of[input] = r.line();
    }
    try {
        return MonotoneFunctional(std::move(use), table);
    } catch (const MonotonicityViolation& e) {
        throw ParseError(line_of.at(e.longer()), e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(use_line_no, e.what());
    }
}

inline void write_functional(std::ostream& out, const MonotoneFunctional& phi) {
    out << "functional v1\n";
    out << "use:";
    for (std::size_t n = 0; n < phi.use_bounds().size(); ++n) {
        out << (n == 0 ? " " : ",") << "u(" << n + 1 << ")=" << phi.use_bounds()[n];
    }
    out << '\n';
    for (const auto& [in, o] : phi.entries()) {
        out << in.display() << " -> " << o.display() << '\n';
    }
}

// ---- mltest v1 ------------------------------------------------------------

inline MLTest read_test(std::istream& in) {
    detail::LineReader r(in);
    r.expect_header("mltest v1");
    std::vector<TestLevel> levels;
    std::string line;
    while (r.next(line)) {
        const auto colon = line.find(':');
        const auto head = detail::words(std::string_view(line).substr(0, colon));
        if (colon == std::string::npos || head.size() != 2 || head[0] != "level") {
            r.fail("expected 'level n: s1, s2, ...', found '" + line + "'");
        }
        const unsigned n = detail::parse_unsigned(r, head[1], "level index");
        if (n != levels.size()) {
            r.fail("expected level " + std::to_string(levels.size()) + ", found level " + std::to_string(n));
        }
        levels.push_back(TestLevel{n, detail::parse_string_list(r, std::string_view(line).substr(colon + 1))});
    }
    return MLTest(std::move(levels));
}

inline void write_test(std::ostream& out, const MLTest& t) {
    out << "mltest v1\n";
    for (const auto& level : t.levels()) {
        out << "level " << level.index << ':';
        detail::write_string_list(out, level.strings);
        out << '\n';
    }
}

// ---- enum v1 --------------------------------------------------------------

inline StageEnumeration read_enumeration(std::istream& in) {
    detail::LineReader r(in);
    r.expect_header("enum v1");
    std::vector<EnumerationEvent> events;
    std::string line;
    while (r.next(line)) {
        const auto w = detail::words(line);
        if (w.size() != 2) {
            r.fail("expected '<element> <stage>', found '" + line + "'");
        }
        events.push_back({detail::parse_u64(r, w[0], "element"), detail::parse_u64(r, w[1], "stage")});
        try {
            StageEnumeration check(events);
        } catch (const PreconditionError& e) {
            r.fail(e.what());
        }
    }
    return StageEnumeration(std::move(events));
}

inline void write_enumeration(std::ostream& out, const StageEnumeration& e) {
    out << "enum v1\n";
    for (const auto& ev : e.events()) {
        out << ev.element << ' ' << ev.stage << '\n';
    }
}

// ---- tree v1 / family v1 (basis combination) ------------------------------

/// "tree v1", then one node per line.
inline std::set<BitString> read_tree(std::istream& in) {
    detail::LineReader r(in);
    r.expect_header("tree v1");
    std::set<BitString> nodes;
    std::string line;
    while (r.next(line)) {
        if (!nodes.insert(detail::parse_bits(r, line)).second) {
            r.fail("duplicate node " + line);
        }
    }
    return nodes;
}

/// "family v1", then "<tau> level n: s1, s2, ..." lines giving U^τ_n.
inline TestFamily read_family(std::istream& in) {
    detail::LineReader r(in);
    r.expect_header("family v1");
    TestFamily family;
    std::string line;
    while (r.next(line)) {
        const auto colon = line.find(':');
        const auto head = detail::words(std::string_view(line).substr(0, colon));
        if (colon == std::string::npos || head.size() != 3 || head[1] != "level") {
            r.fail("expected '<tau> level n: s1, s2, ...', found '" + line + "'");
        }
        const BitString tau = detail::parse_bits(r, head[0]);
        const unsigned n = detail::parse_unsigned(r, head[2], "level index");
        auto strings = detail::parse_string_list(r, std::string_view(line).substr(colon + 1));
        if (!family.emplace(std::make_pair(n, tau), std::move(strings)).second) {
            r.fail("duplicate level " + std::to_string(n) + " for " + tau.display());
        }
    }
    return family;
}

} // namespace cantor::io
