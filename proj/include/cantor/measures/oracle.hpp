#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "cantor/core/bitstring.hpp"
#include "cantor/core/rational.hpp"

namespace cantor {

/// Approximation capability for a Borel probability measure μ on Cantor space:
/// value(σ, n) is within 2^{-n} of μ⟦σ⟧. An exact oracle returns μ⟦σ⟧ itself
/// for every n, and its values are exactly additive.
///
/// Oracles are immutable values; copies share the underlying evaluator.
class MeasureOracle {
public:
    using Evaluator = std::function<Rational(const BitString&, unsigned)>;

    MeasureOracle(Evaluator eval, bool exact, std::string name = "measure")
        : eval_(std::make_shared<const Evaluator>(std::move(eval))), exact_(exact), name_(std::move(name)) {}

    Rational value(const BitString& sigma, unsigned precision = 0) const { return (*eval_)(sigma, precision); }
    Rational operator()(const BitString& sigma) const { return value(sigma, 0); }

    bool exact() const noexcept { return exact_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::shared_ptr<const Evaluator> eval_;
    bool exact_;
    std::string name_;
};

} // namespace cantor
