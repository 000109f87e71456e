// SPDX-License-Identifier: Apache-2.0
//
// phasecs — compressive sampling and sparse recovery of phase-modulated signals
// Copyright (C) 2026 phasecs project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Residual-constrained l1 minimization
//
//     min ||theta||_1   s.t.   ||y - A*theta||_2 <= epsilon
//
// solved by accelerated proximal gradient (FISTA) on the penalized form
// lambda*||theta||_1 + 1/2*||y - A*theta||_2^2 with geometric continuation in
// lambda: lambda starts at 0.9*||A^H y||_inf and halves until the stage
// solution meets the residual budget or the stage budget is exhausted.
// A solve is single-threaded and deterministic.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "phasecs/model.hpp"
#include "phasecs/rng.hpp"
#include "phasecs/sampling.hpp"

namespace phasecs {

// Coefficient domain the prox step projects onto. Alphabet-atom and phase-grid
// dictionaries carry nonnegative magnitudes; stacked offset-quadrature models
// solve over signed reals; Complex is the general default.
enum class CoefficientDomain { Complex, Real, NonnegativeReal };

struct SolverConfig {
    int max_iterations = 400;      // per continuation stage
    double tolerance = 1e-8;       // relative-change stop within a stage
    int continuation_steps = 60;
    double epsilon = 0.0;          // residual budget
    CoefficientDomain domain = CoefficientDomain::Complex;
    Eigen::Index block_size = 0;   // J; per-block support is extracted when > 0
    bool record_objective = false; // keep the per-iteration penalized objective
    double operator_norm_bound = 0.0; // > 0 skips the power-iteration estimate
};

struct BlockSupport {
    Eigen::Index block = 0;
    Eigen::Index atom = 0;
    Complex coefficient{0.0, 0.0};
};

struct SparseSolution {
    Eigen::VectorXcd theta_hat;
    double residual_norm = 0.0;
    double objective = 0.0; // l1 norm attained
    int iterations = 0;
    bool converged = false;
    std::vector<BlockSupport> per_block_support;
    // diagnostics
    double final_lambda = 0.0;
    int stages_used = 0;
    std::vector<double> objective_history; // filled when cfg.record_objective
};

// prox of lambda*|.| for complex scalars: z * max(1 - lambda/|z|, 0).
inline Complex complex_soft_threshold(Complex z, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("complex_soft_threshold: threshold must be >= 0");
    const double mag = std::abs(z);
    if (mag <= lambda) return {0.0, 0.0};
    return z * ((mag - lambda) / mag);
}

inline double soft_threshold(double x, double lambda) {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

/// Matrix-free complex linear operator with adjoint.
class LinearOperator {
  public:
    virtual ~LinearOperator() = default;
    virtual Eigen::Index rows() const = 0;
    virtual Eigen::Index cols() const = 0;
    virtual Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const = 0;
    virtual Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &y) const = 0;
};

class DenseOperator final : public LinearOperator {
  public:
    explicit DenseOperator(Eigen::MatrixXcd a) : a_(std::move(a)) {}
    Eigen::Index rows() const override { return a_.rows(); }
    Eigen::Index cols() const override { return a_.cols(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override { return a_ * x; }
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &y) const override {
        return a_.adjoint() * y;
    }
    const Eigen::MatrixXcd &matrix() const { return a_; }

  private:
    Eigen::MatrixXcd a_;
};

// Psi as an operator (works for SignalModel and StackedSignalModel).
template <class Model>
class BasisOperator final : public LinearOperator {
  public:
    explicit BasisOperator(const Model &model) : model_(&model) {}
    Eigen::Index rows() const override { return model_->num_samples; }
    Eigen::Index cols() const override { return model_->coeff_dim(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override { return model_->apply(x); }
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &y) const override {
        return model_->apply_adjoint(y);
    }

  private:
    const Model *model_;
};

// Embeds a shorter basis into a longer sample window (rows padded with zeros).
class PaddedOperator final : public LinearOperator {
  public:
    PaddedOperator(const LinearOperator &base, Eigen::Index rows) : base_(&base), rows_(rows) {
        if (rows < base.rows())
            throw std::invalid_argument("PaddedOperator: padded row count smaller than the base");
    }
    Eigen::Index rows() const override { return rows_; }
    Eigen::Index cols() const override { return base_->cols(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows_);
        out.head(base_->rows()) = base_->apply(x);
        return out;
    }
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &y) const override {
        return base_->apply_adjoint(y.head(base_->rows()));
    }

  private:
    const LinearOperator *base_;
    Eigen::Index rows_;
};

// Phi composed with a basis operator: A = Phi * base.
class MeasuredOperator final : public LinearOperator {
  public:
    MeasuredOperator(const MeasurementSystem &sys, const LinearOperator &base)
        : sys_(&sys), base_(&base) {
        if (sys.samples() != base.rows())
            throw std::invalid_argument("MeasuredOperator: Phi columns must match the basis rows");
    }
    Eigen::Index rows() const override { return sys_->measurements(); }
    Eigen::Index cols() const override { return base_->cols(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override {
        return measure(*sys_, base_->apply(x));
    }
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &y) const override {
        return base_->apply_adjoint(measure_adjoint(*sys_, y));
    }

  private:
    const MeasurementSystem *sys_;
    const LinearOperator *base_;
};

// Horizontal concatenation [A_1 A_2 ... A_K]; all parts share the row space.
class ConcatOperator final : public LinearOperator {
  public:
    explicit ConcatOperator(std::vector<const LinearOperator *> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw std::invalid_argument("ConcatOperator: empty operator list");
        rows_ = parts_.front()->rows();
        offsets_.push_back(0);
        for (const LinearOperator *p : parts_) {
            if (p->rows() != rows_)
                throw std::invalid_argument("ConcatOperator: operators disagree on row dimension");
            offsets_.push_back(offsets_.back() + p->cols());
        }
    }
    Eigen::Index rows() const override { return rows_; }
    Eigen::Index cols() const override { return offsets_.back(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows_);
        for (std::size_t i = 0; i < parts_.size(); ++i)
            out += parts_[i]->apply(x.segment(offsets_[i], parts_[i]->cols()));
        return out;
    }
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &y) const override {
        Eigen::VectorXcd out(cols());
        for (std::size_t i = 0; i < parts_.size(); ++i)
            out.segment(offsets_[i], parts_[i]->cols()) = parts_[i]->apply_adjoint(y);
        return out;
    }
    Eigen::Index part_offset(std::size_t i) const { return offsets_[i]; }

  private:
    std::vector<const LinearOperator *> parts_;
    std::vector<Eigen::Index> offsets_;
    Eigen::Index rows_ = 0;
};

// Largest singular value via power iteration on A^H A (deterministic start).
inline double operator_norm(const LinearOperator &a, int iterations = 100) {
    Eigen::VectorXcd v(a.cols());
    {
        GaussianStream g(0x9e3779b97f4a7c15ull);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(g.next(), g.next());
    }
    double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;
    double sigma_sq = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd w = a.apply_adjoint(a.apply(v));
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        const double prev = sigma_sq;
        sigma_sq = wn; // = ||A^H A v|| ≈ sigma^2 for unit v
        v = w / wn;
        if (it > 0 && std::abs(sigma_sq - prev) <= 1e-13 * sigma_sq) break;
    }
    return std::sqrt(sigma_sq);
}

inline std::vector<BlockSupport> extract_block_support(const Eigen::VectorXcd &theta,
                                                       Eigen::Index block_size) {
    std::vector<BlockSupport> support;
    if (block_size <= 0 || theta.size() % block_size != 0) return support;
    const Eigen::Index blocks = theta.size() / block_size;
    support.reserve(static_cast<std::size_t>(blocks));
    for (Eigen::Index b = 0; b < blocks; ++b) {
        Eigen::Index best = 0;
        double best_mag = -1.0;
        for (Eigen::Index a = 0; a < block_size; ++a) {
            const double mag = std::abs(theta[b * block_size + a]);
            if (mag > best_mag) {
                best_mag = mag;
                best = a;
            }
        }
        support.push_back({b, best, theta[b * block_size + best]});
    }
    return support;
}

namespace detail {

inline void prox_l1(Eigen::VectorXcd &v, double threshold, CoefficientDomain domain) {
    switch (domain) {
        case CoefficientDomain::Complex:
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v[i] = complex_soft_threshold(v[i], threshold);
            break;
        case CoefficientDomain::Real:
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v[i] = soft_threshold(v[i].real(), threshold);
            break;
        case CoefficientDomain::NonnegativeReal:
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                const double x = v[i].real() - threshold;
                v[i] = x > 0.0 ? x : 0.0;
            }
            break;
    }
}

inline void validate_config(const SolverConfig &cfg) {
    if (cfg.max_iterations < 1) throw std::invalid_argument("SolverConfig: max_iterations must be positive");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("SolverConfig: tolerance must be positive");
    if (cfg.continuation_steps < 1)
        throw std::invalid_argument("SolverConfig: continuation_steps must be positive");
    if (cfg.epsilon < 0.0) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
}

} // namespace detail

inline SparseSolution bpdn_solve(const LinearOperator &a, const Eigen::VectorXcd &y,
                                 const SolverConfig &cfg) {
    detail::validate_config(cfg);
    if (y.size() != a.rows()) throw std::invalid_argument("bpdn_solve: data length mismatch");
    if (!y.allFinite()) throw std::invalid_argument("bpdn_solve: data contains non-finite values");

    const Eigen::Index n = a.cols();
    SparseSolution sol;
    sol.theta_hat = Eigen::VectorXcd::Zero(n);

    const double y_norm = y.norm();
    // Basis pursuit with epsilon = 0 is accepted at numerical exactness.
    const double feasible_at = std::max(cfg.epsilon, 1e-12 * y_norm);
    if (y_norm == 0.0) {
        sol.converged = true;
        if (cfg.block_size > 0) sol.per_block_support = extract_block_support(sol.theta_hat, cfg.block_size);
        return sol;
    }

    const double op_norm =
        cfg.operator_norm_bound > 0.0 ? cfg.operator_norm_bound : operator_norm(a);
    if (!(op_norm > 0.0) || !std::isfinite(op_norm))
        throw std::invalid_argument("bpdn_solve: operator norm is zero or non-finite");
    const double step = 0.99 / (op_norm * op_norm);
    if (!std::isfinite(step)) throw std::invalid_argument("bpdn_solve: non-finite step size");

    double lambda = 0.9 * a.apply_adjoint(y).cwiseAbs().maxCoeff();
    constexpr double kLambdaShrink = 0.5;

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd ax = Eigen::VectorXcd::Zero(y.size());
    double residual = y_norm;

    for (int stage = 0; stage < cfg.continuation_steps && lambda > 0.0; ++stage) {
        sol.stages_used = stage + 1;
        sol.final_lambda = lambda;

        Eigen::VectorXcd z = x, az = ax;
        double t = 1.0;
        double fx = lambda * x.lpNorm<1>() + 0.5 * (y - ax).squaredNorm();

        for (int it = 0; it < cfg.max_iterations; ++it) {
            Eigen::VectorXcd cand = z - step * a.apply_adjoint(az - y);
            detail::prox_l1(cand, step * lambda, cfg.domain);
            Eigen::VectorXcd acand = a.apply(cand);
            double fcand = lambda * cand.lpNorm<1>() + 0.5 * (y - acand).squaredNorm();

            if (fcand > fx * (1.0 + 1e-15)) {
                // momentum overshoot: restart with a plain proximal step from x
                t = 1.0;
                cand = x - step * a.apply_adjoint(ax - y);
                detail::prox_l1(cand, step * lambda, cfg.domain);
                acand = a.apply(cand);
                fcand = lambda * cand.lpNorm<1>() + 0.5 * (y - acand).squaredNorm();
            }

            const double change = (cand - x).norm();
            const double x_scale = std::max(x.norm(), 1e-12);
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double momentum = (t - 1.0) / t_next;
            z = cand + momentum * (cand - x);
            az = acand + momentum * (acand - ax);
            x.swap(cand);
            ax.swap(acand);
            fx = fcand;
            t = t_next;
            ++sol.iterations;
            if (cfg.record_objective) sol.objective_history.push_back(fx);
            if (change <= cfg.tolerance * x_scale) break;
        }

        residual = (y - ax).norm();
        if (residual <= feasible_at) {
            sol.converged = true;
            break;
        }
        lambda *= kLambdaShrink;
    }

    sol.theta_hat = std::move(x);
    sol.residual_norm = residual;
    sol.objective = sol.theta_hat.lpNorm<1>();
    if (cfg.block_size > 0)
        sol.per_block_support = extract_block_support(sol.theta_hat, cfg.block_size);
    return sol;
}

/**
 * Joint recovery of several signals sharing one measurement vector
 * (min sum_i ||theta_i||_1 s.t. ||y - Phi sum_i Psi_i theta_i|| <= eps),
 * solved as a single problem over the concatenated operator and split back.
 * All bases must share the sample window and the coefficient domain.
 */
inline std::vector<SparseSolution> multi_signal_solve(
    const std::vector<const LinearOperator *> &bases, const MeasurementSystem &phi,
    const Eigen::VectorXcd &y, const SolverConfig &cfg,
    const std::vector<Eigen::Index> &block_sizes = {}) {
    if (bases.empty()) throw std::invalid_argument("multi_signal_solve: empty basis list");
    if (!block_sizes.empty() && block_sizes.size() != bases.size())
        throw std::invalid_argument("multi_signal_solve: one block size per basis required");

    ConcatOperator cat(bases);
    MeasuredOperator a(phi, cat);
    SolverConfig joint_cfg = cfg;
    joint_cfg.block_size = 0;
    if (joint_cfg.operator_norm_bound == 0.0) {
        // ||[A_1 .. A_K]||^2 <= sum ||A_i||^2; summing per-part estimates keeps
        // the step size invariant to the order of the bases
        double sq = 0.0;
        for (const LinearOperator *base : bases) {
            MeasuredOperator part(phi, *base);
            const double s = operator_norm(part);
            sq += s * s;
        }
        joint_cfg.operator_norm_bound = std::sqrt(sq);
    }
    const SparseSolution joint = bpdn_solve(a, y, joint_cfg);

    std::vector<SparseSolution> split;
    split.reserve(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        SparseSolution s;
        s.theta_hat = joint.theta_hat.segment(cat.part_offset(i), bases[i]->cols());
        s.residual_norm = joint.residual_norm; // shared constraint
        s.objective = s.theta_hat.lpNorm<1>();
        s.iterations = joint.iterations;
        s.converged = joint.converged;
        s.final_lambda = joint.final_lambda;
        s.stages_used = joint.stages_used;
        if (!block_sizes.empty() && block_sizes[i] > 0)
            s.per_block_support = extract_block_support(s.theta_hat, block_sizes[i]);
        split.push_back(std::move(s));
    }
    return split;
}

} // namespace phasecs
