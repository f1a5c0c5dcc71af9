#include "onesided/dsl.hpp"

#include <cctype>
#include <cmath>

namespace onesided {

namespace {

// splitmix64: a fixed, platform-independent stream for random(pieces)
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform_pm1() {  // [-1, 1)
        return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
    }
};

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        if (pos == start) fail("expected a function name");
        return s.substr(start, pos - start);
    }
    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    double number() {
        skip_ws();
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(s.substr(pos), &consumed);
        } catch (const std::exception&) {
            fail("expected a number");
        }
        pos += consumed;
        return v;
    }
    void end() {
        skip_ws();
        if (pos != s.size()) fail("trailing input");
    }
};

ClosedForm parse_form(Parser& p, const Grid& g, std::uint64_t seed) {
    const std::string name = p.ident();
    p.expect('(');
    if (name == "constant") {
        const double c = p.number();
        p.expect(')');
        return ClosedForm::constant(c);
    }
    if (name == "indicator") {
        const double a = p.number();
        p.expect(',');
        const double b = p.number();
        p.expect(')');
        if (!(a < b)) p.fail("indicator needs a < b");
        return ClosedForm::indicator(a, b);
    }
    if (name == "power") {
        const double gamma = p.number();
        p.expect(')');
        return ClosedForm::power(gamma);
    }
    if (name == "exponential") {
        const double sl = p.number();
        p.expect(')');
        return ClosedForm::exponential(sl);
    }
    if (name == "bump") {
        const double c = p.number();
        p.expect(',');
        const double w = p.number();
        p.expect(')');
        if (!(w > 0.0)) p.fail("bump needs width > 0");
        return ClosedForm::bump(c, w);
    }
    if (name == "piecewise") {
        std::vector<std::pair<double, double>> knots;
        do {
            const double x = p.number();
            p.expect(':');
            const double v = p.number();
            knots.emplace_back(x, v);
        } while (p.accept(','));
        p.expect(')');
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i].first > knots[i - 1].first)) p.fail("piecewise breakpoints must increase");
        return ClosedForm::piecewise(std::move(knots));
    }
    if (name == "random") {
        const double pieces_real = p.number();
        p.expect(')');
        const int pieces = static_cast<int>(pieces_real);
        if (pieces < 1 || pieces != pieces_real) p.fail("random needs a positive integer piece count");
        SplitMix64 rng{seed ^ 0x5851f42d4c957f2dULL};
        std::vector<std::pair<double, double>> knots;
        const double step = g.span() / pieces;
        for (int i = 0; i < pieces; ++i) knots.emplace_back(g.lo() + i * step, rng.uniform_pm1());
        return ClosedForm::piecewise(std::move(knots));
    }
    p.fail("unknown function '" + name + "'");
}

}  // namespace

SampledFunction parse_function_dsl(const std::string& spec, const Grid& g, std::uint64_t seed) {
    Parser p{spec};
    ClosedForm form = parse_form(p, g, seed);
    p.end();
    if (const auto* pw = std::get_if<forms::Power>(&form.variant())) {
        if (pw->gamma < 0.0) throw ParameterOutOfRange("power(gamma) with gamma < 0 is only a weight form");
    }
    return SampledFunction::from_form(g, form);
}

Weight parse_weight_dsl(const std::string& spec, const Grid& g, std::uint64_t seed) {
    Parser p{spec};
    ClosedForm form = parse_form(p, g, seed);
    p.end();
    if (const auto* pw = std::get_if<forms::Power>(&form.variant()))
        return power_weight(g, pw->gamma);
    return Weight(SampledFunction::from_form(g, form));
}

std::vector<NamedFunction> default_test_family(const Grid& g, std::uint64_t seed) {
    std::vector<NamedFunction> fam;
    auto add = [&](const std::string& name, const ClosedForm& form) {
        fam.push_back({name, SampledFunction::from_form(g, form)});
    };
    add("bump(-3,1.5)", ClosedForm::bump(-3.0, 1.5));
    add("bump(-1,0.8)", ClosedForm::bump(-1.0, 0.8));
    add("bump(0,2)", ClosedForm::bump(0.0, 2.0));
    add("bump(1.2,0.6)", ClosedForm::bump(1.2, 0.6));
    add("bump(2.5,1.2)", ClosedForm::bump(2.5, 1.2));
    add("bump(4,1.8)", ClosedForm::bump(4.0, 1.8));
    add("indicator(-4,-1)", ClosedForm::indicator(-4.0, -1.0));
    add("indicator(-2,0.5)", ClosedForm::indicator(-2.0, 0.5));
    add("indicator(-0.5,0.5)", ClosedForm::indicator(-0.5, 0.5));
    add("indicator(0,1)", ClosedForm::indicator(0.0, 1.0));
    add("indicator(0.75,3)", ClosedForm::indicator(0.75, 3.0));
    add("indicator(2,5)", ClosedForm::indicator(2.0, 5.0));
    add("power(0.25)", ClosedForm::power(0.25));
    add("odd_power(0.25)", ClosedForm::power(0.25, 0.0, true));
    add("power(0.5)", ClosedForm::power(0.5));
    add("odd_power(0.5)", ClosedForm::power(0.5, 0.0, true));
    for (int i = 0; i < 4; ++i) {
        const std::string spec = "random(8)";
        fam.push_back({spec + "#" + std::to_string(i),
                       parse_function_dsl(spec, g, seed + static_cast<std::uint64_t>(i))});
    }
    return fam;
}

SampledFunction apply_support_window(const SampledFunction& f) {
    const Grid& g = f.grid();
    const double margin = 0.125 * g.span();
    const double lo = g.lo() + margin, hi = g.hi() - margin;
    std::vector<double> v(f.values().begin(), f.values().end());
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        if (x < lo || x > hi) v[static_cast<std::size_t>(i)] = 0.0;
    }
    return SampledFunction::from_samples(g, std::move(v));
}

}  // namespace onesided
