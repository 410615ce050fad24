#include "tlo/symbol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tlo/io.hpp"

namespace tlo {

struct Profile::Node {
    enum class Op { constant, indicator, power, gaussian, cosine, sampled, sum, product };
    Op op;
    cplx value{};
    double a = 0.0;
    double b = 0.0;
    std::optional<SampledFunction> samples;
    std::string label;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
};

namespace {

using Node = Profile::Node;
using Op = Node::Op;

std::string number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string number(cplx z) {
    if (z.imag() == 0.0) return number(z.real());
    return number(z.real()) + "," + number(z.imag());
}

cplx eval(const Node& n, double r) {
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::indicator: return (r >= n.a && r <= n.b) ? 1.0 : 0.0;
        case Op::power: return n.a == 0.0 ? 1.0 : std::pow(std::abs(r), n.a);
        case Op::gaussian: {
            const double t = (r - n.a) / n.b;
            return std::exp(-std::numbers::pi * t * t);
        }
        case Op::cosine: {
            const double t = (r - n.a) / n.b;
            return std::abs(t) <= 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * t)) : 0.0;
        }
        case Op::sampled: return n.samples->interpolate(r);
        case Op::sum: return eval(*n.left, r) + eval(*n.right, r);
        case Op::product: return eval(*n.left, r) * eval(*n.right, r);
    }
    return {};
}

void collect_breaks(const Node& n, std::vector<double>& out) {
    switch (n.op) {
        case Op::indicator:
            if (std::isfinite(n.a)) out.push_back(n.a);
            if (std::isfinite(n.b)) out.push_back(n.b);
            break;
        case Op::power:
            if (n.a != 0.0) out.push_back(0.0);
            break;
        case Op::cosine:
            out.push_back(n.a - n.b);
            out.push_back(n.a + n.b);
            break;
        case Op::sampled:
            out.push_back(n.samples->grid.start());
            out.push_back(n.samples->grid.back());
            break;
        case Op::sum:
        case Op::product:
            collect_breaks(*n.left, out);
            collect_breaks(*n.right, out);
            break;
        default: break;
    }
}

std::optional<double> node_bound(const Node& n) {
    switch (n.op) {
        case Op::constant: return std::abs(n.value);
        case Op::indicator:
        case Op::gaussian:
        case Op::cosine: return 1.0;
        case Op::power:
            if (n.a == 0.0) return 1.0;
            return std::nullopt;
        case Op::sampled: {
            double m = 0.0;
            for (const cplx& v : n.samples->values) m = std::max(m, std::abs(v));
            return m;
        }
        case Op::sum:
        case Op::product: {
            const auto l = node_bound(*n.left);
            const auto r = node_bound(*n.right);
            // A vanishing factor bounds a product even when the other side is unbounded.
            if (n.op == Op::product && ((l && *l == 0.0) || (r && *r == 0.0))) return 0.0;
            if (!l || !r) return std::nullopt;
            return n.op == Op::sum ? *l + *r : *l * *r;
        }
    }
    return std::nullopt;
}

bool node_real(const Node& n) {
    switch (n.op) {
        case Op::constant: return n.value.imag() == 0.0;
        case Op::sampled:
            return std::all_of(n.samples->values.begin(), n.samples->values.end(),
                               [](const cplx& v) { return v.imag() == 0.0; });
        case Op::sum:
        case Op::product: return node_real(*n.left) && node_real(*n.right);
        default: return true;
    }
}

std::string node_describe(const Node& n) {
    switch (n.op) {
        case Op::constant: return "const:" + number(n.value);
        case Op::indicator: return "indicator:" + number(n.a) + "," + number(n.b);
        case Op::power: return "power:" + number(n.a);
        case Op::gaussian: return "gaussian:" + number(n.a) + "," + number(n.b);
        case Op::cosine: return "cosine:" + number(n.a) + "," + number(n.b);
        case Op::sampled: return "sampled:" + n.label;
        case Op::sum: return "(" + node_describe(*n.left) + ")+(" + node_describe(*n.right) + ")";
        case Op::product: return "(" + node_describe(*n.left) + ")*(" + node_describe(*n.right) + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Descriptor parsing

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw SymbolParseError("symbol '" + std::string(text) + "': " + what + " at position " +
                                   std::to_string(pos),
                               pos);
    }

    double real() {
        const std::size_t begin = pos;
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(begin, end - begin);
        double value = 0.0;
        if (token == "inf" || token == "+inf") {
            value = std::numeric_limits<double>::infinity();
        } else if (token == "-inf") {
            value = -std::numeric_limits<double>::infinity();
        } else {
            const char* first = token.data();
            const char* last = token.data() + token.size();
            if (!token.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (token.empty() || ec != std::errc{} || ptr != last) fail("expected a number");
            if (!std::isfinite(value)) fail("number out of range");
        }
        pos = end;
        return value;
    }

    void comma() {
        if (pos >= text.size() || text[pos] != ',') fail("expected ','");
        ++pos;
    }

    void finish() const {
        if (pos != text.size()) fail("unexpected trailing text");
    }
};

}  // namespace

Profile Profile::constant(cplx c) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("Profile::constant: value must be finite");
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = c;
    return Profile(std::move(n));
}

Profile Profile::indicator(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || !(a < b))
        throw std::invalid_argument("Profile::indicator: need a < b, got [" + number(a) + ", " + number(b) + "]");
    auto n = std::make_shared<Node>();
    n->op = Op::indicator;
    n->a = a;
    n->b = b;
    return Profile(std::move(n));
}

Profile Profile::power(double p) {
    if (!std::isfinite(p)) throw std::invalid_argument("Profile::power: exponent must be finite");
    auto n = std::make_shared<Node>();
    n->op = Op::power;
    n->a = p;
    return Profile(std::move(n));
}

Profile Profile::gaussian(double center, double width) {
    if (!std::isfinite(center) || !std::isfinite(width) || !(width > 0.0))
        throw std::invalid_argument("Profile::gaussian: need finite center and positive width");
    auto n = std::make_shared<Node>();
    n->op = Op::gaussian;
    n->a = center;
    n->b = width;
    return Profile(std::move(n));
}

Profile Profile::cosine(double center, double half_width) {
    if (!std::isfinite(center) || !std::isfinite(half_width) || !(half_width > 0.0))
        throw std::invalid_argument("Profile::cosine: need finite center and positive half width");
    auto n = std::make_shared<Node>();
    n->op = Op::cosine;
    n->a = center;
    n->b = half_width;
    return Profile(std::move(n));
}

Profile Profile::sampled(SampledFunction samples, std::string label) {
    for (const cplx& v : samples.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("Profile::sampled: samples must be finite");
    auto n = std::make_shared<Node>();
    n->op = Op::sampled;
    n->samples = std::move(samples);
    n->label = std::move(label);
    return Profile(std::move(n));
}

Profile Profile::operator+(const Profile& other) const {
    auto n = std::make_shared<Node>();
    n->op = Op::sum;
    n->left = node_;
    n->right = other.node_;
    return Profile(std::move(n));
}

Profile Profile::operator*(const Profile& other) const {
    auto n = std::make_shared<Node>();
    n->op = Op::product;
    n->left = node_;
    n->right = other.node_;
    return Profile(std::move(n));
}

Profile Profile::scaled(cplx factor) const { return constant(factor) * *this; }

cplx Profile::operator()(double r) const { return eval(*node_, r); }

std::vector<double> Profile::breakpoints() const {
    std::vector<double> out;
    collect_breaks(*node_, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<double> Profile::bound() const { return node_bound(*node_); }

bool Profile::is_real() const { return node_real(*node_); }

std::string Profile::describe() const { return node_describe(*node_); }

Profile parse_profile(std::string_view text) {
    Cursor cur{text};
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) cur.fail("expected '<kind>:<parameters>'");
    const std::string_view kind = text.substr(0, colon);
    cur.pos = colon + 1;
    if (kind == "sampled") {
        const std::string path(text.substr(cur.pos));
        if (path.empty()) cur.fail("expected a file name");
        return Profile::sampled(read_signal_csv(path), path);
    }
    if (kind == "const") {
        const double re = cur.real();
        double im = 0.0;
        if (cur.pos < text.size()) {
            cur.comma();
            im = cur.real();
        }
        cur.finish();
        if (!std::isfinite(re) || !std::isfinite(im)) cur.fail("constant must be finite");
        return Profile::constant({re, im});
    }
    if (kind == "power") {
        const double p = cur.real();
        cur.finish();
        if (!std::isfinite(p)) cur.fail("exponent must be finite");
        return Profile::power(p);
    }
    if (kind == "indicator" || kind == "gaussian" || kind == "cosine") {
        const std::size_t first_pos = cur.pos;
        const double a = cur.real();
        cur.comma();
        const std::size_t second_pos = cur.pos;
        const double b = cur.real();
        cur.finish();
        if (kind == "indicator") {
            if (!(a < b)) {
                cur.pos = second_pos;
                cur.fail("indicator needs a < b");
            }
            return Profile::indicator(a, b);
        }
        if (!std::isfinite(a)) {
            cur.pos = first_pos;
            cur.fail("center must be finite");
        }
        if (!std::isfinite(b) || !(b > 0.0)) {
            cur.pos = second_pos;
            cur.fail("width must be positive and finite");
        }
        return kind == "gaussian" ? Profile::gaussian(a, b) : Profile::cosine(a, b);
    }
    cur.pos = 0;
    cur.fail("unknown symbol kind '" + std::string(kind) +
             "' (expected const, indicator, power, gaussian, cosine or sampled)");
}

// ---------------------------------------------------------------------------
// SymbolSpec

SymbolSpec SymbolSpec::first(Profile alpha) {
    SymbolSpec s(Kind::first_variable);
    s.descriptor = alpha.describe();
    s.alpha = std::move(alpha);
    return s;
}

SymbolSpec SymbolSpec::second(Profile beta) {
    SymbolSpec s(Kind::second_variable);
    s.descriptor = "second(" + beta.describe() + ")";
    s.beta = std::move(beta);
    return s;
}

SymbolSpec SymbolSpec::separable(Profile alpha, Profile beta) {
    SymbolSpec s(Kind::separable);
    s.descriptor = "separable(" + alpha.describe() + ";" + beta.describe() + ")";
    s.alpha = std::move(alpha);
    s.beta = std::move(beta);
    return s;
}

SymbolSpec SymbolSpec::piecewise(Profile alpha, std::string descriptor) {
    SymbolSpec s(Kind::piecewise_constant);
    s.alpha = std::move(alpha);
    s.descriptor = std::move(descriptor);
    return s;
}

SymbolSpec SymbolSpec::from_function(std::function<cplx(double, double)> a, std::string descriptor, bool real) {
    if (!a) throw std::invalid_argument("SymbolSpec::from_function: empty function");
    SymbolSpec s(Kind::general);
    s.general = std::move(a);
    s.descriptor = std::move(descriptor);
    s.general_real_ = real;
    return s;
}

cplx SymbolSpec::operator()(double r, double s) const {
    switch (kind) {
        case Kind::first_variable:
        case Kind::piecewise_constant: return alpha(r);
        case Kind::second_variable: return beta(s);
        case Kind::separable: return alpha(r) * beta(s);
        case Kind::general: return general(r, s);
    }
    return {};
}

bool SymbolSpec::is_real() const {
    switch (kind) {
        case Kind::first_variable:
        case Kind::piecewise_constant: return alpha.is_real();
        case Kind::second_variable: return beta.is_real();
        case Kind::separable: return alpha.is_real() && beta.is_real();
        case Kind::general: return general_real_;
    }
    return false;
}

std::vector<double> SymbolSpec::first_breakpoints() const {
    if (kind == Kind::second_variable || kind == Kind::general) return {};
    return alpha.breakpoints();
}

std::string_view to_string(SymbolSpec::Kind kind) {
    switch (kind) {
        case SymbolSpec::Kind::first_variable: return "first_variable";
        case SymbolSpec::Kind::second_variable: return "second_variable";
        case SymbolSpec::Kind::separable: return "separable";
        case SymbolSpec::Kind::piecewise_constant: return "piecewise_constant";
        case SymbolSpec::Kind::general: return "general";
    }
    return "general";
}

}  // namespace tlo
