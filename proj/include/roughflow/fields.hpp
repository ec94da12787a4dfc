#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "roughflow/jet.hpp"
#include "roughflow/linalg.hpp"

namespace roughflow {

enum class DerivStrategy { analytic, forward, finite_difference };

DerivStrategy deriv_strategy_from_name(const std::string& name);

// Dense multivariate polynomial, the workhorse of the analytic and
// forward-mode derivative oracles.
struct Monomial {
    double coef = 0.0;
    std::vector<int> exps;
};

struct Polynomial {
    int nvars = 0;
    std::vector<Monomial> terms;

    double eval(const Vec& x) const;
    NilpotentJet eval(const std::vector<NilpotentJet>& x) const;
    // sum_i v_i d/dx_i, with a concrete direction vector
    Polynomial directional(const Vec& v) const;
};

// A single vector field with value and symmetric derivative oracle
// D^k f(a)·(v_1,...,v_k); max_order is the declared regularity budget.
struct VectorField {
    std::function<Vec(const Vec&)> value;
    std::function<Vec(const Vec&, const std::vector<Vec>&)> deriv;
    int max_order = 0;
};

struct FdOptions {
    double step = 1e-5;
    bool richardson = false;
};

VectorField linear_field(const Mat& m);
VectorField polynomial_field(std::vector<Polynomial> components, DerivStrategy strategy,
                             FdOptions fd = {});
// Derivative oracle by nested central differences around the value map.
VectorField finite_difference_field(std::function<Vec(const Vec&)> value, int dimension,
                                    int max_order, FdOptions fd = {});
// Planar rotation with angular velocity omega (a linear field).
VectorField rotation_field(double omega, DerivStrategy strategy, FdOptions fd = {});
// (x, y) -> (y, mu (1 - x^2) y - x); smooth polynomial nonlinearity.
VectorField vanderpol_field(double mu, DerivStrategy strategy, FdOptions fd = {});

// Letter-indexed family f_i : R^m -> R^m.
struct VectorFieldFamily {
    int dimension = 0;
    std::string letters;
    std::vector<VectorField> fields;

    const VectorField& field(std::size_t letter) const;
};

struct Box {
    Vec lo, hi;
    Vec sample(std::mt19937_64& rng) const;
};

// Empirical per-grade field-norm constants: nu_i bounds max{Lip, sup} of
// F[w] per unit coefficient over all words of grade i.
struct FieldNorms {
    std::vector<double> nu; // index 1..n used
};

FieldNorms estimate_field_norms(const VectorFieldFamily& family, int max_grade, const Box& box,
                                int samples, std::uint64_t seed);

} // namespace roughflow
