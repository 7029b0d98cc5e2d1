// Constrained TV reconstruction.
//
// All three recovery problems (independent, smoothness-constrained, and the
// prediction-error variant) are instances of
//
//   min_x TV(x)  s.t.  ||A x - y||_2 <= delta,  ||x[idx_k] - t_k||_2 <= eps_k
//
// solved with a first-order primal-dual iteration (Chambolle-Pock form): the
// TV dual is projected onto per-pixel unit discs and each quadratic ball
// contributes an l2 shrinkage on its dual. The equality constraint of the
// problem statement is relaxed to a residual ball of radius
// delta = delta_eq * ||y||; after the iteration the solution is re-projected
// onto that ball through the normal equations so the feasibility contract
// holds deterministically.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "scbcs/errors.hpp"
#include "scbcs/geometry.hpp"
#include "scbcs/image.hpp"
#include "scbcs/preview.hpp"
#include "scbcs/sensing.hpp"

namespace scbcs {

enum class SolveMode { Independent, ScBaseline, ScPredicted, Genie };

struct SolverConfig {
    int max_iterations = 2000;
    double tol = 1e-4;       // relative-change stopping tolerance
    double delta_eq = 1e-4;  // measurement ball radius as a fraction of ||y||
    SolveMode mode = SolveMode::ScPredicted;

    void validate() const {
        if (max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
        if (!(tol > 0.0)) throw InvalidConfig("stopping tolerance must be positive");
        if (!(delta_eq > 0.0)) throw InvalidConfig("delta_eq must be positive");
    }
};

// Isotropic TV with forward differences and replicate (Neumann) boundary.
inline double tv_norm(const Eigen::MatrixXd& x) {
    const int rows = static_cast<int>(x.rows());
    const int cols = static_cast<int>(x.cols());
    double acc = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double dr = (r + 1 < rows) ? x(r + 1, c) - x(r, c) : 0.0;
            double dc = (c + 1 < cols) ? x(r, c + 1) - x(r, c) : 0.0;
            acc += std::sqrt(dr * dr + dc * dc);
        }
    }
    return acc;
}

inline Eigen::VectorXd subtract_border_contribution(const Eigen::VectorXd& y,
                                                    const Eigen::MatrixXd& phi_border,
                                                    const Eigen::VectorXd& border_pixels) {
    if (phi_border.rows() != y.size() || phi_border.cols() != border_pixels.size())
        throw DimensionMismatch("border subtraction shape mismatch");
    return y - phi_border * border_pixels;
}

// One l2-ball constraint ||x[indices] - target|| <= radius on a subset of the
// unknown pixels.
struct BallConstraint {
    std::vector<int> indices;
    Eigen::VectorXd target;
    double radius = 0.0;
};

struct BorderConstraint {
    Eigen::VectorXd target;
    double epsilon = 0.0;
};

struct BorderConstraintSet {
    std::optional<BorderConstraint> top, bottom, left, right;
};

struct ReconstructionProblem {
    Eigen::MatrixXd phi_inside;  // M x n
    Eigen::VectorXd y_inside;    // M
    int rows = 0, cols = 0;      // inside-region shape, n = rows * cols
    std::optional<Eigen::MatrixXd> prediction;  // X_P for the prediction-error variant
    BorderConstraintSet borders;
    std::optional<Eigen::MatrixXd> warm_start;
};

struct SolveDiagnostics {
    int iterations = 0;
    double rel_change = 0.0;
    bool converged = false;
    double tv = 0.0;
    double meas_residual = 0.0;
    double meas_allowance = 0.0;
    std::vector<double> border_residuals;
    std::vector<double> border_allowances;
    bool epsilon_doubled = false;
    bool feasible = true;
};

struct SolveResult {
    Eigen::MatrixXd block;
    SolveDiagnostics diag;
};

namespace detail {

// Forward-difference gradient, row-major layout idx = r * cols + c.
inline void tv_grad(const double* x, int rows, int cols, double* gr, double* gc) {
    for (int r = 0; r < rows; ++r) {
        const int base = r * cols;
        for (int c = 0; c < cols; ++c) {
            const int i = base + c;
            gr[i] = (r + 1 < rows) ? x[i + cols] - x[i] : 0.0;
            gc[i] = (c + 1 < cols) ? x[i + 1] - x[i] : 0.0;
        }
    }
}

// Adjoint of tv_grad (negative divergence), accumulated into out.
inline void tv_grad_adjoint(const double* gr, const double* gc, int rows, int cols, double* out) {
    for (int r = 0; r < rows; ++r) {
        const int base = r * cols;
        for (int c = 0; c < cols; ++c) {
            const int i = base + c;
            if (r + 1 < rows) {
                out[i + cols] += gr[i];
                out[i] -= gr[i];
            }
            if (c + 1 < cols) {
                out[i + 1] += gc[i];
                out[i] -= gc[i];
            }
        }
    }
}

// Spectral norm of the stacked operator [grad; A; selectors] by power
// iteration on K^T K with a fixed start vector.
inline double stacked_operator_norm(const Eigen::MatrixXd& a, int rows, int cols,
                                    const std::vector<BallConstraint>& balls) {
    const int n = rows * cols;
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::VectorXd gr(n), gc(n), next(n), av(a.rows());
    double lambda = 8.0;
    for (int it = 0; it < 50; ++it) {
        tv_grad(v.data(), rows, cols, gr.data(), gc.data());
        next.setZero();
        tv_grad_adjoint(gr.data(), gc.data(), rows, cols, next.data());
        av.noalias() = a * v;
        next.noalias() += a.transpose() * av;
        for (const BallConstraint& b : balls)
            for (int idx : b.indices) next[idx] += v[idx];
        double norm = next.norm();
        if (norm <= 0.0) break;
        lambda = norm;
        v = next / norm;
    }
    return std::sqrt(lambda) * 1.01;
}

struct PdhgProblem {
    const Eigen::MatrixXd& a;
    const Eigen::VectorXd& y;
    double delta;
    int rows, cols;
    const std::vector<BallConstraint>& balls;
};

// step_ratio scales the primal step against the dual step (tau*sigma stays at
// 1/L^2). Image-intensity problems sit far from unit scale, so the default
// boosts the primal; anywhere in [4, 64] behaves equivalently on this
// problem family.
inline Eigen::VectorXd pdhg_solve(const PdhgProblem& prob, Eigen::VectorXd x, int max_iterations,
                                  double tol, SolveDiagnostics& diag, double step_ratio = 16.0) {
    const int n = prob.rows * prob.cols;
    const int m = static_cast<int>(prob.a.rows());
    const double l = stacked_operator_norm(prob.a, prob.rows, prob.cols, prob.balls);
    const double tau = step_ratio / l;
    const double sigma = 1.0 / (step_ratio * l);

    Eigen::VectorXd pr = Eigen::VectorXd::Zero(n);   // TV dual, row component
    Eigen::VectorXd pc = Eigen::VectorXd::Zero(n);   // TV dual, column component
    Eigen::VectorXd q = Eigen::VectorXd::Zero(m);    // measurement-ball dual
    std::vector<Eigen::VectorXd> r;                  // border-ball duals
    r.reserve(prob.balls.size());
    for (const BallConstraint& b : prob.balls)
        r.push_back(Eigen::VectorXd::Zero(b.target.size()));

    Eigen::VectorXd xbar = x, xprev = x;
    Eigen::VectorXd gr(n), gc(n), ax(m), step(n);
    diag.converged = false;
    diag.iterations = 0;
    diag.rel_change = std::numeric_limits<double>::infinity();

    for (int it = 0; it < max_iterations; ++it) {
        // Dual for TV: ascend then project each pixel pair onto the unit disc.
        tv_grad(xbar.data(), prob.rows, prob.cols, gr.data(), gc.data());
        for (int i = 0; i < n; ++i) {
            double a1 = pr[i] + sigma * gr[i];
            double a2 = pc[i] + sigma * gc[i];
            double mag = std::sqrt(a1 * a1 + a2 * a2);
            double scale = mag > 1.0 ? 1.0 / mag : 1.0;
            pr[i] = a1 * scale;
            pc[i] = a2 * scale;
        }
        // Dual for the measurement ball: l2 shrinkage by sigma * delta.
        ax.noalias() = prob.a * xbar;
        q.noalias() += sigma * ax;
        q.noalias() -= sigma * prob.y;
        {
            double norm = q.norm();
            double shrink = norm > 0.0 ? std::max(0.0, 1.0 - sigma * prob.delta / norm) : 0.0;
            q *= shrink;
        }
        // Duals for the border balls.
        for (size_t k = 0; k < prob.balls.size(); ++k) {
            const BallConstraint& b = prob.balls[k];
            Eigen::VectorXd& rk = r[k];
            for (size_t j = 0; j < b.indices.size(); ++j)
                rk[static_cast<Eigen::Index>(j)] +=
                    sigma * (xbar[b.indices[j]] - b.target[static_cast<Eigen::Index>(j)]);
            double norm = rk.norm();
            double shrink = norm > 0.0 ? std::max(0.0, 1.0 - sigma * b.radius / norm) : 0.0;
            rk *= shrink;
        }
        // Primal descent along K^T duals; the primal function is zero so the
        // prox is the identity.
        step.setZero();
        tv_grad_adjoint(pr.data(), pc.data(), prob.rows, prob.cols, step.data());
        step.noalias() += prob.a.transpose() * q;
        for (size_t k = 0; k < prob.balls.size(); ++k) {
            const BallConstraint& b = prob.balls[k];
            for (size_t j = 0; j < b.indices.size(); ++j)
                step[b.indices[j]] += r[k][static_cast<Eigen::Index>(j)];
        }
        xprev.swap(x);
        x = xprev - tau * step;
        xbar = 2.0 * x - xprev;

        diag.iterations = it + 1;
        double denom = std::max(xprev.norm(), 1e-12);
        diag.rel_change = (x - xprev).norm() / denom;
        if (diag.rel_change < tol) {
            diag.converged = true;
            break;
        }
    }
    return x;
}

// Least-norm correction onto the measurement ball; leaves x untouched when it
// is already feasible.
inline void project_measurement_ball(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                     double delta, const Eigen::LLT<Eigen::MatrixXd>& llt,
                                     Eigen::VectorXd& x) {
    Eigen::VectorXd res = a * x - y;
    double norm = res.norm();
    if (norm <= delta) return;
    double keep = delta > 0.0 ? delta / norm : 0.0;
    x.noalias() -= a.transpose() * llt.solve(res * (1.0 - keep));
}

inline Eigen::LLT<Eigen::MatrixXd> measurement_gram_factor(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd gram = a * a.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        gram.diagonal().array() += 1e-12 * gram.trace() / static_cast<double>(gram.rows());
        llt.compute(gram);
    }
    return llt;
}

// Alternating exact projections onto the border balls and the measurement
// ball. The iteration ends on a measurement projection so the measurement
// contract holds exactly; the delta_eq-relative slack on the border radii
// absorbs that final correction. Returns true when every ball is satisfied.
inline bool enforce_feasibility(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double delta,
                                const std::vector<BallConstraint>& balls, double delta_eq,
                                Eigen::VectorXd& x) {
    Eigen::LLT<Eigen::MatrixXd> llt = measurement_gram_factor(a);
    for (int round = 0; round < 50; ++round) {
        for (const BallConstraint& b : balls) {
            double norm = 0.0;
            for (size_t j = 0; j < b.indices.size(); ++j) {
                double d = x[b.indices[j]] - b.target[static_cast<Eigen::Index>(j)];
                norm += d * d;
            }
            norm = std::sqrt(norm);
            if (norm <= b.radius) continue;
            double scale = b.radius / norm;
            for (size_t j = 0; j < b.indices.size(); ++j) {
                Eigen::Index jj = static_cast<Eigen::Index>(j);
                x[b.indices[j]] = b.target[jj] + (x[b.indices[j]] - b.target[jj]) * scale;
            }
        }
        project_measurement_ball(a, y, delta, llt, x);
        bool ok = true;
        for (const BallConstraint& b : balls) {
            double norm = 0.0;
            for (size_t j = 0; j < b.indices.size(); ++j) {
                double d = x[b.indices[j]] - b.target[static_cast<Eigen::Index>(j)];
                norm += d * d;
            }
            if (std::sqrt(norm) > b.radius * (1.0 + 0.5 * delta_eq)) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

inline Eigen::MatrixXd reshape_to_block(const Eigen::VectorXd& x, int rows, int cols) {
    Eigen::MatrixXd out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out(r, c) = x[r * cols + c];
    return out;
}

inline Eigen::VectorXd flatten_block(const Eigen::MatrixXd& x) {
    Eigen::VectorXd out(x.size());
    for (int r = 0; r < x.rows(); ++r)
        for (int c = 0; c < x.cols(); ++c) out[r * x.cols() + c] = x(r, c);
    return out;
}

inline void record_feasibility(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double delta,
                               const std::vector<BallConstraint>& balls, double delta_eq,
                               const Eigen::VectorXd& x, SolveDiagnostics& diag) {
    diag.meas_residual = (a * x - y).norm();
    diag.meas_allowance = delta;
    diag.border_residuals.clear();
    diag.border_allowances.clear();
    diag.feasible = diag.meas_residual <= delta * (1.0 + 1e-9) + 1e-12;
    for (const BallConstraint& b : balls) {
        double res = 0.0;
        for (size_t j = 0; j < b.indices.size(); ++j) {
            double d = x[b.indices[j]] - b.target[static_cast<Eigen::Index>(j)];
            res += d * d;
        }
        res = std::sqrt(res);
        double allowance = b.radius * (1.0 + delta_eq);
        diag.border_residuals.push_back(res);
        diag.border_allowances.push_back(allowance);
        if (res > allowance) diag.feasible = false;
    }
}

// Solve with the stated radii; if a border ball is left violated, double all
// border radii once and retry from the first attempt's solution.
inline SolveResult solve_with_retry(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                    double delta, int rows, int cols,
                                    std::vector<BallConstraint> balls, Eigen::VectorXd x0,
                                    const SolverConfig& config) {
    SolveResult result;
    Eigen::VectorXd x = pdhg_solve({a, y, delta, rows, cols, balls}, std::move(x0),
                                   config.max_iterations, config.tol, result.diag);
    bool feasible = enforce_feasibility(a, y, delta, balls, config.delta_eq, x);
    record_feasibility(a, y, delta, balls, config.delta_eq, x, result.diag);

    if (!feasible) {
        // The border balls most likely exclude every measurement-feasible
        // point; double the radii once and retry from the current iterate.
        for (BallConstraint& b : balls) b.radius *= 2.0;
        SolveDiagnostics retry;
        x = pdhg_solve({a, y, delta, rows, cols, balls}, x, config.max_iterations, config.tol,
                       retry);
        enforce_feasibility(a, y, delta, balls, config.delta_eq, x);
        result.diag.iterations += retry.iterations;
        result.diag.rel_change = retry.rel_change;
        result.diag.converged = retry.converged;
        result.diag.epsilon_doubled = true;
        record_feasibility(a, y, delta, balls, config.delta_eq, x, result.diag);
    }
    result.block = reshape_to_block(x, rows, cols);
    result.diag.tv = tv_norm(result.block);
    return result;
}

inline std::vector<BallConstraint> border_balls(const BorderConstraintSet& borders, int rows,
                                                int cols) {
    std::vector<BallConstraint> balls;
    auto add = [&](const std::optional<BorderConstraint>& side, int expected_len, auto index_of) {
        if (!side) return;
        if (side->target.size() != expected_len)
            throw DimensionMismatch("border target length mismatch");
        BallConstraint b;
        b.indices.resize(static_cast<size_t>(expected_len));
        for (int k = 0; k < expected_len; ++k) b.indices[static_cast<size_t>(k)] = index_of(k);
        b.target = side->target;
        b.radius = side->epsilon;
        balls.push_back(std::move(b));
    };
    add(borders.top, cols, [&](int c) { return c; });
    add(borders.bottom, cols, [&](int c) { return (rows - 1) * cols + c; });
    add(borders.left, rows, [&](int r) { return r * cols; });
    add(borders.right, rows, [&](int r) { return r * cols + cols - 1; });
    return balls;
}

}  // namespace detail

// Independent TV recovery: min TV(X) s.t. ||Phi vec(X) - y|| <= delta_eq*||y||.
inline SolveResult reconstruct_tv(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int rows,
                                  int cols, const SolverConfig& config,
                                  const std::optional<Eigen::MatrixXd>& warm_start = {}) {
    config.validate();
    if (phi.rows() != y.size()) throw DimensionMismatch("measurement length mismatch");
    if (phi.cols() != static_cast<Eigen::Index>(rows) * cols)
        throw DimensionMismatch("block shape does not match sensing matrix width");
    if (phi.rows() > phi.cols()) throw DimensionMismatch("expected M <= N");
    // Without a preview to start from, the least-norm feasible point
    // A^T (A A^T)^-1 y converges far faster than a zero start.
    Eigen::VectorXd x0;
    if (warm_start) {
        x0 = detail::flatten_block(*warm_start);
        if (x0.size() != rows * cols) throw DimensionMismatch("warm start shape mismatch");
    } else {
        x0 = phi.transpose() * detail::measurement_gram_factor(phi).solve(y);
    }
    double delta = config.delta_eq * y.norm();
    return detail::solve_with_retry(phi, y, delta, rows, cols, {}, std::move(x0), config);
}

// Smoothness-constrained recovery over the inside region (border targets from
// the merged preview, or from ground truth in Genie mode).
inline SolveResult reconstruct_sc(const ReconstructionProblem& problem,
                                  const SolverConfig& config) {
    config.validate();
    if (config.mode != SolveMode::ScBaseline && config.mode != SolveMode::Genie)
        throw InvalidConfig("reconstruct_sc handles the ScBaseline and Genie modes");
    if (problem.prediction) throw InvalidConfig("reconstruct_sc takes no prediction block");
    const int n = problem.rows * problem.cols;
    if (problem.phi_inside.cols() != n || problem.phi_inside.rows() != problem.y_inside.size())
        throw DimensionMismatch("problem shape mismatch");
    std::vector<BallConstraint> balls =
        detail::border_balls(problem.borders, problem.rows, problem.cols);
    Eigen::VectorXd x0 = problem.warm_start ? detail::flatten_block(*problem.warm_start)
                                            : Eigen::VectorXd::Zero(n);
    double delta = config.delta_eq * problem.y_inside.norm();
    return detail::solve_with_retry(problem.phi_inside, problem.y_inside, delta, problem.rows,
                                    problem.cols, std::move(balls), std::move(x0), config);
}

// Prediction-error recovery: X = X_P + E with TV(E) minimized. Equivalent to
// reconstruct_sc after shifting the measurements and the border targets by the
// prediction's contribution.
inline SolveResult reconstruct_sc_predicted(const ReconstructionProblem& problem,
                                            const SolverConfig& config) {
    config.validate();
    if (!problem.prediction) throw InvalidConfig("prediction block X_P is required");
    const int n = problem.rows * problem.cols;
    if (problem.prediction->rows() != problem.rows || problem.prediction->cols() != problem.cols)
        throw DimensionMismatch("prediction shape mismatch");
    if (problem.phi_inside.cols() != n || problem.phi_inside.rows() != problem.y_inside.size())
        throw DimensionMismatch("problem shape mismatch");

    Eigen::VectorXd pred = detail::flatten_block(*problem.prediction);
    Eigen::VectorXd y_shift = problem.y_inside - problem.phi_inside * pred;
    std::vector<BallConstraint> balls =
        detail::border_balls(problem.borders, problem.rows, problem.cols);
    for (BallConstraint& b : balls)
        for (size_t j = 0; j < b.indices.size(); ++j)
            b.target[static_cast<Eigen::Index>(j)] -= pred[b.indices[j]];
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n);
    if (problem.warm_start) e0 = detail::flatten_block(*problem.warm_start) - pred;
    // The ball radius stays tied to the unshifted measurements.
    double delta = config.delta_eq * problem.y_inside.norm();
    SolveResult res = detail::solve_with_retry(problem.phi_inside, y_shift, delta, problem.rows,
                                               problem.cols, std::move(balls), std::move(e0),
                                               config);
    res.block += *problem.prediction;
    res.diag.tv = tv_norm(res.block - *problem.prediction);
    return res;
}

// Per-block orchestration: column split, measurement-side border subtraction,
// target extraction and mode dispatch. `ground_truth` supplies Genie targets.
inline SolveResult reconstruct_block(const BlockGrid& grid, int block_id,
                                     const MeasurementSet& set, const SensingMatrix& phi,
                                     const PreviewImage* preview, const EpsilonSet* epsilons,
                                     const SolverConfig& config,
                                     const Image* ground_truth = nullptr) {
    config.validate();
    if (block_id < 0 || block_id >= grid.num_blocks()) throw OutOfBounds("block id out of range");
    const BlockSpec& spec = grid.blocks[block_id];
    const Eigen::VectorXd& y = set.y[static_cast<size_t>(block_id)];
    const int b = grid.block_size;

    auto preview_region = [&](int row_begin, int row_end, int col_begin, int col_end,
                              const Image& src) {
        Eigen::MatrixXd out(row_end - row_begin, col_end - col_begin);
        for (int r = row_begin; r < row_end; ++r)
            for (int c = col_begin; c < col_end; ++c) out(r - row_begin, c - col_begin) = src.at(r, c);
        return out;
    };

    if (config.mode == SolveMode::Independent) {
        std::optional<Eigen::MatrixXd> warm;
        if (preview)
            warm = preview_region(spec.row_begin, spec.row_end, spec.col_begin, spec.col_end,
                                  preview->pixels);
        SolveResult full = reconstruct_tv(phi.entries, y, b, b, config, warm);
        SolveResult out;
        out.diag = full.diag;
        out.block = full.block.block(spec.in_row_begin, spec.in_col_begin, spec.inside_rows(),
                                     spec.inside_cols());
        return out;
    }

    if (!preview || !epsilons) throw InvalidConfig("sc modes need a preview and epsilon set");
    if (config.mode == SolveMode::Genie && !ground_truth)
        throw InvalidConfig("genie mode needs the original image");

    ColumnSplit split = split_matrix_columns(phi, spec);
    Eigen::VectorXd border_px(static_cast<Eigen::Index>(spec.border_indices.size()));
    for (size_t k = 0; k < spec.border_indices.size(); ++k) {
        int local = spec.border_indices[k];
        border_px[static_cast<Eigen::Index>(k)] =
            preview->pixels.at(spec.row_begin + local / b, spec.col_begin + local % b);
    }

    ReconstructionProblem problem;
    problem.phi_inside = std::move(split.inside);
    problem.y_inside = spec.border_indices.empty()
                           ? y
                           : subtract_border_contribution(y, split.border, border_px);
    problem.rows = spec.inside_rows();
    problem.cols = spec.inside_cols();

    const Image& target_src =
        (config.mode == SolveMode::Genie) ? *ground_truth : preview->pixels;
    const SideDisagreement& eps = epsilons->radii[static_cast<size_t>(block_id)];
    const int ir0 = spec.row_begin + spec.in_row_begin;
    const int ir1 = spec.row_begin + spec.in_row_end;
    const int ic0 = spec.col_begin + spec.in_col_begin;
    const int ic1 = spec.col_begin + spec.in_col_end;
    auto row_segment = [&](int row) {
        Eigen::VectorXd seg(ic1 - ic0);
        for (int c = ic0; c < ic1; ++c) seg[c - ic0] = target_src.at(row, c);
        return seg;
    };
    auto col_segment = [&](int col) {
        Eigen::VectorXd seg(ir1 - ir0);
        for (int r = ir0; r < ir1; ++r) seg[r - ir0] = target_src.at(r, col);
        return seg;
    };
    if (spec.top) problem.borders.top = BorderConstraint{row_segment(ir0 - 1), eps.top.value()};
    if (spec.bottom) problem.borders.bottom = BorderConstraint{row_segment(ir1), eps.bottom.value()};
    if (spec.left) problem.borders.left = BorderConstraint{col_segment(ic0 - 1), eps.left.value()};
    if (spec.right) problem.borders.right = BorderConstraint{col_segment(ic1), eps.right.value()};

    Eigen::MatrixXd preview_inside = preview_region(ir0, ir1, ic0, ic1, preview->pixels);
    problem.warm_start = preview_inside;
    if (config.mode == SolveMode::ScPredicted) {
        problem.prediction = std::move(preview_inside);
        return reconstruct_sc_predicted(problem, config);
    }
    return reconstruct_sc(problem, config);
}

}  // namespace scbcs
