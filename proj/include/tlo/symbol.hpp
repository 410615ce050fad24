#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tlo/grid.hpp"

namespace tlo {

/// A function of one real variable used as a symbol factor alpha(r) or beta(s).
/// Immutable; copies share structure.
class Profile {
public:
    static Profile constant(cplx c);
    /// Indicator of the closed interval [a, b]; either end may be infinite.
    static Profile indicator(double a, double b);
    /// |r|^p (r^p on the scale axis, where r > 0).
    static Profile power(double p);
    /// e^{-pi ((r - center) / width)^2}.
    static Profile gaussian(double center, double width);
    /// Raised cosine (1 + cos(pi (r - center) / half_width)) / 2 on |r - center| <= half_width.
    static Profile cosine(double center, double half_width);
    /// Linear interpolation of samples, zero outside.
    static Profile sampled(SampledFunction samples, std::string label);

    Profile operator+(const Profile& other) const;
    Profile operator*(const Profile& other) const;
    Profile scaled(cplx factor) const;

    cplx operator()(double r) const;

    /// Points where the profile jumps or has a kink.
    std::vector<double> breakpoints() const;
    /// An upper bound for |profile| on the whole line, if it is bounded.
    std::optional<double> bound() const;
    bool is_real() const;
    std::string describe() const;

    struct Node;

private:
    explicit Profile(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Raised for malformed symbol descriptors; `position` is the offending
/// character offset.
class SymbolParseError : public std::invalid_argument {
public:
    SymbolParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Parses `const:c`, `indicator:a,b`, `power:p`, `gaussian:c,w`,
/// `cosine:c,h` or `sampled:<csv file>`. Numbers accept `inf`/`-inf` and, for
/// constants, a complex form `re,im`.
Profile parse_profile(std::string_view text);

/// A symbol a(r, s) on G = G1 x G2.
struct SymbolSpec {
    enum class Kind { first_variable, second_variable, separable, piecewise_constant, general };

    explicit SymbolSpec(Kind k) : kind(k) {}

    Kind kind;
    Profile alpha = Profile::constant(1.0);
    Profile beta = Profile::constant(1.0);
    std::function<cplx(double, double)> general;
    std::string descriptor;

    static SymbolSpec first(Profile alpha);
    static SymbolSpec second(Profile beta);
    static SymbolSpec separable(Profile alpha, Profile beta);
    /// First-variable symbol that is constant on the pieces of a partition.
    static SymbolSpec piecewise(Profile alpha, std::string descriptor);
    /// Arbitrary a(r, s); `real` declares whether it is real-valued.
    static SymbolSpec from_function(std::function<cplx(double, double)> a, std::string descriptor, bool real);

    cplx operator()(double r, double s) const;
    bool depends_on_first() const { return kind != Kind::second_variable; }
    bool depends_on_second() const { return kind == Kind::second_variable || kind == Kind::separable || kind == Kind::general; }
    bool is_real() const;
    /// Breakpoints of the first-variable factor (empty for general symbols).
    std::vector<double> first_breakpoints() const;

private:
    bool general_real_ = false;
};

std::string_view to_string(SymbolSpec::Kind kind);

}  // namespace tlo
