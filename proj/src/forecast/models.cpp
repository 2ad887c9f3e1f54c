#include "arrkit/forecast/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "arrkit/core/error.hpp"
#include "arrkit/core/random.hpp"
#include "arrkit/nn/serialize.hpp"
#include "arrkit/nn/training.hpp"
#include "arrkit/simd/kernels.hpp"

namespace arrkit::forecast {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::ridge: return "ridge";
        case Family::logistic_l1: return "logistic_l1";
        case Family::gbdt: return "gbdt";
        case Family::mlp: return "mlp";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (auto f : {Family::ridge, Family::logistic_l1, Family::gbdt, Family::mlp})
        if (family_name(f) == name) return f;
    throw DataError("unknown model family '" + std::string(name) + "'");
}

Family linear_family(Task task) { return task == Task::regression ? Family::ridge : Family::logistic_l1; }

Grid default_grid(Family family, Task task) {
    switch (family) {
        case Family::ridge:
            if (task != Task::regression) throw Error("ridge is a regression family");
            return {{"alpha", {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}}, {"fit_intercept", {0.0, 1.0}}};
        case Family::logistic_l1:
            if (task != Task::classification) throw Error("logistic_l1 is a classification family");
            return {{"C", {0.01, 0.1, 1.0, 10.0, 100.0}}};
        case Family::gbdt:
            return {{"learning_rate", {1e-4, 1e-3, 1e-2, 1e-1}},
                    {"n_estimators", {5, 10, 20, 40, 80, 160, 320}},
                    {"num_leaves", {5, 10, 20, 40, 80}},
                    {"reg_alpha", {0.0, 1e-4, 1e-3, 1e-2, 1e-1}},
                    {"reg_beta", {0.0, 1e-4, 1e-3, 1e-2, 1e-1}}};
        case Family::mlp:
            return {{"hidden_layer_sizes", {5, 10, 20, 40, 80, 160}},
                    {"alpha", {0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}},
                    {"learning_rate_init", {1e-4, 1e-3, 1e-2, 1e-1}},
                    {"early_stopping", {1.0}},
                    {"max_iter", {500}}};
    }
    return {};
}

nlohmann::json to_json(const Params& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

// ---------------------------------------------------------------- helpers

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    const double n = static_cast<double>(x.rows());
    s.mean.assign(x.cols(), 0.0);
    s.scale.assign(x.cols(), 1.0);
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) m += x(r, c);
        m /= n;
        double v = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) v += (x(r, c) - m) * (x(r, c) - m);
        v /= n;
        s.mean[c] = m;
        s.scale[c] = v > 0.0 ? std::sqrt(v) : 1.0;
    }
    return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (x.cols() != mean.size()) throw Error("feature count mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / scale[c];
    return out;
}

namespace {

void check_xy(const Matrix& x, std::span<const double> y) {
    if (x.rows() != y.size()) throw Error("feature rows and targets differ in length");
    if (x.rows() == 0) throw Error("empty training set");
}

void check_labels(std::span<const double> y) {
    for (double v : y)
        if (v != 0.0 && v != 1.0) throw Error("classification labels must be 0 or 1");
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Solves A x = b for symmetric positive definite A by Cholesky.
std::vector<double> cholesky_solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 1e-12 * std::max(max_diag, 1e-300)))
            throw Error("ridge: singular system (collinear features with alpha = 0)");
        a(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / a(j, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= a(i, k) * b[k];
        b[i] /= a(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) b[i] -= a(k, i) * b[k];
        b[i] /= a(i, i);
    }
    return b;
}

nlohmann::json standardizer_json(const Standardizer& s) { return {{"mean", s.mean}, {"scale", s.scale}}; }

}  // namespace

// ------------------------------------------------------------------ ridge

std::vector<double> RidgeModel::predict(const Matrix& x) const {
    if (x.cols() != coef.size()) throw Error("ridge: feature count mismatch");
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = intercept + simd::dot(x.row(r), coef);
    return out;
}

nlohmann::json RidgeModel::to_json() const { return {{"family", "ridge"}, {"coef", coef}, {"intercept", intercept}}; }

RidgeModel fit_ridge(const Matrix& x, std::span<const double> y, double alpha, bool fit_intercept, bool standardize) {
    check_xy(x, y);
    if (alpha < 0.0) throw Error("ridge: alpha must be non-negative");
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    std::vector<double> x_mean(p, 0.0), x_scale(p, 1.0);
    double y_mean = 0.0;
    if (fit_intercept) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < p; ++c) x_mean[c] += x(r, c);
        for (double& m : x_mean) m /= static_cast<double>(n);
        y_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    }
    if (standardize) {
        const auto s = Standardizer::fit(x);
        x_scale = s.scale;
    }
    Matrix xt(p, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < p; ++c) xt(c, r) = (x(r, c) - x_mean[c]) / x_scale[c];
    std::vector<double> yc(y.begin(), y.end());
    for (double& v : yc) v -= y_mean;

    Matrix a(p, p);
    std::vector<double> b(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double v = simd::dot(xt.row(i), xt.row(j));
            a(i, j) = v;
            a(j, i) = v;
        }
        a(i, i) += alpha;
        b[i] = simd::dot(xt.row(i), yc);
    }
    const auto beta = p ? cholesky_solve(a, b) : std::vector<double>{};
    RidgeModel m;
    m.coef.resize(p);
    m.intercept = y_mean;
    for (std::size_t c = 0; c < p; ++c) {
        m.coef[c] = beta[c] / x_scale[c];
        m.intercept -= m.coef[c] * x_mean[c];
    }
    return m;
}

// --------------------------------------------------------------- logistic

std::vector<double> LogisticModel::decision(const Matrix& x) const {
    const Matrix z = standardizer.apply(x);
    std::vector<double> out(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r) out[r] = simd::dot(z.row(r), coef);
    return out;
}

std::vector<double> LogisticModel::predict(const Matrix& x) const {
    auto d = decision(x);
    for (double& v : d) v = sigmoid(v);
    return d;
}

nlohmann::json LogisticModel::to_json() const {
    return {{"family", "logistic_l1"}, {"standardizer", standardizer_json(standardizer)}, {"coef", coef},
            {"iterations", iterations}, {"tolerance", tolerance}, {"converged", converged}};
}

LogisticModel fit_logistic_l1(const Matrix& x, std::span<const double> labels, double c, const LogisticConfig& config) {
    check_xy(x, labels);
    check_labels(labels);
    if (!(c > 0.0)) throw Error("logistic: C must be positive");
    LogisticModel m;
    m.standardizer = Standardizer::fit(x);
    const Matrix z = m.standardizer.apply(x);
    const std::size_t n = z.rows();
    const std::size_t p = z.cols();
    const double nd = static_cast<double>(n);
    const double lambda = 1.0 / (c * nd);

    // Lipschitz constant of the mean log-loss gradient: 0.25 * lambda_max(Z^T Z) / n.
    Matrix gram(p, p);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) gram(i, j) += z(r, i) * z(r, j);
    std::vector<double> v(p, 1.0), w(p);
    double top = 0.0;
    for (int it = 0; it < 200 && p > 0; ++it) {
        for (std::size_t i = 0; i < p; ++i) w[i] = simd::dot(gram.row(i), v);
        const double norm = std::sqrt(simd::sum_sq(w));
        if (norm == 0.0) break;
        top = norm;
        for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / norm;
    }
    const double lip = std::max(1.01 * 0.25 * top / nd, 1e-12);

    auto gradient = [&](const std::vector<double>& beta, std::vector<double>& g) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double e = sigmoid(simd::dot(z.row(r), beta)) - labels[r];
            simd::axpy(e / nd, z.row(r), g);
        }
    };
    auto prox = [&](const std::vector<double>& point, const std::vector<double>& g, std::vector<double>& out) {
        const double thr = lambda / lip;
        for (std::size_t i = 0; i < p; ++i) {
            const double u = point[i] - g[i] / lip;
            out[i] = u > thr ? u - thr : (u < -thr ? u + thr : 0.0);
        }
    };

    std::vector<double> beta(p, 0.0), prev(p, 0.0), yk(p, 0.0), g(p), next(p), probe(p);
    double t = 1.0;
    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        gradient(yk, g);
        prox(yk, g, next);
        // Gradient-map norm at the new iterate decides convergence.
        gradient(next, g);
        prox(next, g, probe);
        double gm = 0.0;
        for (std::size_t i = 0; i < p; ++i) gm += (next[i] - probe[i]) * (next[i] - probe[i]);
        gm = lip * std::sqrt(gm);
        double restart = 0.0;
        for (std::size_t i = 0; i < p; ++i) restart += (yk[i] - next[i]) * (next[i] - beta[i]);
        prev = beta;
        beta = next;
        m.iterations = it;
        m.tolerance = gm;
        if (!std::isfinite(gm)) throw TrainingError("logistic: non-finite gradient");
        if (gm < config.tolerance) {
            m.converged = true;
            break;
        }
        if (restart > 0.0) t = 1.0;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        for (std::size_t i = 0; i < p; ++i) yk[i] = beta[i] + (t - 1.0) / t_next * (beta[i] - prev[i]);
        t = t_next;
    }
    m.coef = beta;
    return m;
}

// -------------------------------------------------------------------- gbdt

std::vector<double> GbdtModel::raw_score(const Matrix& x) const {
    std::vector<double> out(x.rows(), base_score);
    for (const auto& tree : trees) {
        for (std::size_t r = 0; r < x.rows(); ++r) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const auto& nd = tree[static_cast<std::size_t>(node)];
                node = x(r, static_cast<std::size_t>(nd.feature)) <= nd.threshold ? nd.left : nd.right;
            }
            out[r] += tree[static_cast<std::size_t>(node)].value;
        }
    }
    return out;
}

std::vector<double> GbdtModel::predict(const Matrix& x) const {
    auto s = raw_score(x);
    if (task == Task::classification)
        for (double& v : s) v = sigmoid(v);
    return s;
}

nlohmann::json GbdtModel::to_json() const {
    auto trees_json = nlohmann::json::array();
    for (const auto& tree : trees) {
        auto t = nlohmann::json::array();
        for (const auto& n : tree) t.push_back({n.feature, n.threshold, n.left, n.right, n.value});
        trees_json.push_back(t);
    }
    return {{"family", "gbdt"}, {"task", task_name(task)}, {"base_score", base_score}, {"trees", trees_json}};
}

namespace {

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

struct GrowLeaf {
    std::vector<std::vector<std::size_t>> sorted;  // per feature, leaf rows ordered by value
    double g = 0.0;
    double h = 0.0;
    int node = 0;
    SplitCandidate best;
};

double thresholded(double g, double alpha) {
    if (g > alpha) return g - alpha;
    if (g < -alpha) return g + alpha;
    return 0.0;
}

double leaf_score(double g, double h, const GbdtConfig& c) {
    const double t = thresholded(g, c.reg_alpha);
    return t * t / (h + c.reg_lambda);
}

double leaf_value(double g, double h, const GbdtConfig& c) { return -thresholded(g, c.reg_alpha) / (h + c.reg_lambda); }

SplitCandidate best_split(const GrowLeaf& leaf, const Matrix& x, const std::vector<double>& grad,
                          const std::vector<double>& hess, const GbdtConfig& c) {
    SplitCandidate best;
    const double parent = leaf_score(leaf.g, leaf.h, c);
    for (std::size_t f = 0; f < leaf.sorted.size(); ++f) {
        const auto& rows = leaf.sorted[f];
        const std::size_t m = rows.size();
        if (m < 2 * c.min_data_in_leaf) continue;
        double gl = 0.0, hl = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            gl += grad[rows[i]];
            hl += hess[rows[i]];
            const double xv = x(rows[i], f);
            const double xn = x(rows[i + 1], f);
            if (!(xn > xv)) continue;
            const std::size_t nl = i + 1;
            if (nl < c.min_data_in_leaf || m - nl < c.min_data_in_leaf) continue;
            const double hr = leaf.h - hl;
            if (hl < c.min_sum_hessian_in_leaf || hr < c.min_sum_hessian_in_leaf) continue;
            const double gain = leaf_score(gl, hl, c) + leaf_score(leaf.g - gl, hr, c) - parent;
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = xv + (xn - xv) / 2.0;
            }
        }
    }
    return best;
}

}  // namespace

GbdtModel fit_gbdt(const Matrix& x, std::span<const double> y, Task task, const GbdtConfig& c) {
    check_xy(x, y);
    if (task == Task::classification) check_labels(y);
    if (!(c.learning_rate > 0.0)) throw Error("gbdt: learning_rate must be positive");
    if (c.num_leaves < 2) throw Error("gbdt: num_leaves must be at least 2");
    if (c.reg_alpha < 0.0 || c.reg_lambda < 0.0) throw Error("gbdt: regularization must be non-negative");
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();

    GbdtModel model;
    model.task = task;
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    if (task == Task::regression) {
        model.base_score = mean;
    } else {
        const double q = std::clamp(mean, 1e-15, 1.0 - 1e-15);
        model.base_score = std::log(q / (1.0 - q));
    }

    std::vector<std::vector<std::size_t>> presorted(p, std::vector<std::size_t>(n));
    for (std::size_t f = 0; f < p; ++f) {
        std::iota(presorted[f].begin(), presorted[f].end(), 0);
        std::stable_sort(presorted[f].begin(), presorted[f].end(),
                         [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    }

    std::vector<double> score(n, model.base_score), grad(n), hess(n);
    std::vector<std::uint8_t> goes_left(n);
    for (std::size_t m = 0; m < c.n_estimators; ++m) {
        for (std::size_t r = 0; r < n; ++r) {
            if (task == Task::regression) {
                grad[r] = score[r] - y[r];
                hess[r] = 1.0;
            } else {
                const double q = sigmoid(score[r]);
                grad[r] = q - y[r];
                hess[r] = std::max(q * (1.0 - q), 1e-16);
            }
        }
        std::vector<TreeNode> tree(1);
        std::vector<GrowLeaf> leaves(1);
        leaves[0].sorted = presorted;
        for (std::size_t r = 0; r < n; ++r) {
            leaves[0].g += grad[r];
            leaves[0].h += hess[r];
        }
        leaves[0].best = best_split(leaves[0], x, grad, hess, c);

        while (leaves.size() < c.num_leaves) {
            std::size_t pick = leaves.size();
            for (std::size_t l = 0; l < leaves.size(); ++l)
                if (leaves[l].best.feature >= 0 && (pick == leaves.size() || leaves[l].best.gain > leaves[pick].best.gain))
                    pick = l;
            if (pick == leaves.size()) break;
            GrowLeaf parent = std::move(leaves[pick]);
            const auto f = static_cast<std::size_t>(parent.best.feature);
            for (std::size_t r : parent.sorted[0]) goes_left[r] = x(r, f) <= parent.best.threshold ? 1 : 0;
            GrowLeaf left, right;
            left.sorted.resize(p);
            right.sorted.resize(p);
            for (std::size_t k = 0; k < p; ++k)
                for (std::size_t r : parent.sorted[k]) (goes_left[r] ? left.sorted[k] : right.sorted[k]).push_back(r);
            for (std::size_t r : left.sorted[0]) {
                left.g += grad[r];
                left.h += hess[r];
            }
            right.g = parent.g - left.g;
            right.h = parent.h - left.h;
            left.node = static_cast<int>(tree.size());
            right.node = left.node + 1;
            auto& pn = tree[static_cast<std::size_t>(parent.node)];
            pn.feature = parent.best.feature;
            pn.threshold = parent.best.threshold;
            pn.left = left.node;
            pn.right = right.node;
            tree.emplace_back();
            tree.emplace_back();
            left.best = best_split(left, x, grad, hess, c);
            right.best = best_split(right, x, grad, hess, c);
            leaves[pick] = std::move(left);
            leaves.push_back(std::move(right));
        }
        for (const auto& leaf : leaves) {
            const double v = c.learning_rate * leaf_value(leaf.g, leaf.h, c);
            tree[static_cast<std::size_t>(leaf.node)].value = v;
            for (std::size_t r : leaf.sorted[0]) score[r] += v;
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

// --------------------------------------------------------------------- mlp

namespace {

Matrix feature_major(const Matrix& x, std::span<const std::size_t> rows) {
    Matrix out(x.cols(), rows.size());
    for (std::size_t b = 0; b < rows.size(); ++b)
        for (std::size_t c = 0; c < x.cols(); ++c) out(c, b) = x(rows[b], c);
    return out;
}

void add_l2(const nn::DenseNet& net, double alpha, double batch, std::vector<double>& grad, double* loss) {
    if (alpha == 0.0) return;
    const auto params = net.params();
    double ss = 0.0;
    for (const auto& s : net.layers())
        for (std::size_t i = s.weight_offset; i < s.weight_offset + s.in * s.out; ++i) {
            grad[i] += alpha * params[i] / batch;
            ss += params[i] * params[i];
        }
    if (loss) *loss += 0.5 * alpha * ss / batch;
}

double mlp_loss(const nn::DenseNet& net, const Matrix& x, const std::vector<double>& y, const nn::LossSpec& spec) {
    Matrix target(1, y.size(), y);
    return nn::loss(net, x, target, spec);
}

}  // namespace

std::vector<double> MlpModel::predict(const Matrix& x) const {
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    const Matrix out = nn::predict(net, feature_major(standardizer.apply(x), rows));
    std::vector<double> y(out.storage());
    if (task == Task::regression)
        for (double& v : y) v = v * y_scale + y_mean;
    return y;
}

nlohmann::json MlpModel::to_json() const {
    return {{"family", "mlp"},         {"task", task_name(task)}, {"standardizer", standardizer_json(standardizer)},
            {"y_mean", y_mean},        {"y_scale", y_scale},      {"epochs", epochs},
            {"network", nn::net_to_json(net)}};
}

MlpModel fit_mlp(const Matrix& x, std::span<const double> y, Task task, const MlpConfig& c) {
    check_xy(x, y);
    if (task == Task::classification) check_labels(y);
    if (c.hidden == 0) throw Error("mlp: hidden size must be positive");
    if (!(c.learning_rate_init > 0.0) || c.alpha < 0.0) throw Error("mlp: invalid learning rate or alpha");
    if (c.max_iter == 0 || c.batch_size == 0) throw Error("mlp: max_iter and batch size must be positive");

    MlpModel m;
    m.task = task;
    m.standardizer = Standardizer::fit(x);
    const Matrix xs = m.standardizer.apply(x);
    const std::size_t n = x.rows();
    std::vector<double> ys(y.begin(), y.end());
    if (task == Task::regression) {
        m.y_mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
        double v = 0.0;
        for (double t : ys) v += (t - m.y_mean) * (t - m.y_mean);
        v /= static_cast<double>(n);
        m.y_scale = v > 0.0 ? std::sqrt(v) : 1.0;
        for (double& t : ys) t = (t - m.y_mean) / m.y_scale;
    }

    Rng rng(derive_seed(c.seed, 11));
    const auto out_act = task == Task::regression ? nn::Activation::identity : nn::Activation::sigmoid;
    m.net = nn::DenseNet(x.cols(), {{c.hidden, nn::Activation::relu}, {1, out_act}});
    m.net.init_glorot(rng);
    const nn::LossSpec spec{task == Task::regression ? nn::LossKind::mse : nn::LossKind::bce, 0.0, 0};

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> train_rows = order, val_rows;
    const bool use_val = c.early_stopping && n >= 20;
    if (use_val) {
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
        const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(c.validation_fraction * static_cast<double>(n))));
        val_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
        train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
        std::sort(val_rows.begin(), val_rows.end());
        std::sort(train_rows.begin(), train_rows.end());
    }
    Matrix val_x;
    std::vector<double> val_y;
    if (use_val) {
        val_x = feature_major(xs, val_rows);
        for (std::size_t r : val_rows) val_y.push_back(ys[r]);
    }

    const std::size_t batch = std::min(c.batch_size, train_rows.size());
    nn::AdamState adam;
    std::vector<double> best_params(m.net.params().begin(), m.net.params().end());
    double best = std::numeric_limits<double>::infinity();
    std::size_t no_improve = 0;
    std::vector<std::size_t> idx = train_rows;
    for (std::size_t epoch = 0; epoch < c.max_iter; ++epoch) {
        for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
        double epoch_loss = 0.0;
        for (std::size_t b0 = 0; b0 < idx.size(); b0 += batch) {
            const std::size_t b1 = std::min(idx.size(), b0 + batch);
            const auto rows = std::span(idx).subspan(b0, b1 - b0);
            const Matrix bx = feature_major(xs, rows);
            Matrix by(1, rows.size());
            for (std::size_t k = 0; k < rows.size(); ++k) by(0, k) = ys[rows[k]];
            auto lg = nn::backward(m.net, bx, by, spec);
            double loss = lg.loss;
            add_l2(m.net, c.alpha, static_cast<double>(rows.size()), lg.gradient, &loss);
            nn::optimizer_step(adam, m.net.params(), lg.gradient, c.learning_rate_init);
            epoch_loss += loss * static_cast<double>(rows.size());
        }
        epoch_loss /= static_cast<double>(idx.size());
        m.epochs = epoch + 1;
        const double monitored = use_val ? mlp_loss(m.net, val_x, val_y, spec) : epoch_loss;
        if (!std::isfinite(monitored)) throw TrainingError("mlp: non-finite loss at epoch " + std::to_string(epoch + 1));
        if (monitored > best - c.tol) {
            ++no_improve;
        } else {
            no_improve = 0;
        }
        if (monitored < best) {
            best = monitored;
            std::copy(m.net.params().begin(), m.net.params().end(), best_params.begin());
        }
        if (no_improve > c.n_iter_no_change) break;
    }
    if (use_val) std::copy(best_params.begin(), best_params.end(), m.net.params().begin());
    return m;
}

// ------------------------------------------------------------------ factory

namespace {

double take(const Params& p, const char* key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void check_keys(const Params& p, std::initializer_list<std::string_view> allowed, Family f) {
    for (const auto& [k, v] : p)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw DataError("unknown " + std::string(family_name(f)) + " hyperparameter '" + k + "'");
}

std::size_t count_param(double v, const char* key) {
    if (!(v >= 0.0) || v != std::floor(v)) throw DataError(std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

}  // namespace

std::unique_ptr<Model> fit_model(Family family, Task task, const Params& p, const Matrix& x, std::span<const double> y,
                                 std::uint64_t seed) {
    switch (family) {
        case Family::ridge: {
            if (task != Task::regression) throw Error("ridge is a regression family");
            check_keys(p, {"alpha", "fit_intercept", "standardize"}, family);
            return std::make_unique<RidgeModel>(
                fit_ridge(x, y, take(p, "alpha", 1.0), take(p, "fit_intercept", 1.0) != 0.0, take(p, "standardize", 0.0) != 0.0));
        }
        case Family::logistic_l1: {
            if (task != Task::classification) throw Error("logistic_l1 is a classification family");
            check_keys(p, {"C"}, family);
            return std::make_unique<LogisticModel>(fit_logistic_l1(x, y, take(p, "C", 1.0)));
        }
        case Family::gbdt: {
            check_keys(p, {"learning_rate", "n_estimators", "num_leaves", "reg_alpha", "reg_beta", "min_data_in_leaf"},
                       family);
            GbdtConfig c;
            c.learning_rate = take(p, "learning_rate", c.learning_rate);
            c.n_estimators = count_param(take(p, "n_estimators", 100), "n_estimators");
            c.num_leaves = count_param(take(p, "num_leaves", 31), "num_leaves");
            c.reg_alpha = take(p, "reg_alpha", 0.0);
            c.reg_lambda = take(p, "reg_beta", 0.0);
            c.min_data_in_leaf = count_param(take(p, "min_data_in_leaf", 20), "min_data_in_leaf");
            return std::make_unique<GbdtModel>(fit_gbdt(x, y, task, c));
        }
        case Family::mlp: {
            check_keys(p, {"hidden_layer_sizes", "alpha", "learning_rate_init", "early_stopping", "max_iter"}, family);
            MlpConfig c;
            c.hidden = count_param(take(p, "hidden_layer_sizes", 100), "hidden_layer_sizes");
            c.alpha = take(p, "alpha", c.alpha);
            c.learning_rate_init = take(p, "learning_rate_init", c.learning_rate_init);
            c.early_stopping = take(p, "early_stopping", 1.0) != 0.0;
            c.max_iter = count_param(take(p, "max_iter", 500), "max_iter");
            c.seed = seed;
            return std::make_unique<MlpModel>(fit_mlp(x, y, task, c));
        }
    }
    throw Error("unknown model family");
}

std::vector<std::size_t> oversample_minority(std::span<const double> labels, std::uint64_t seed) {
    check_labels(labels);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1.0 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) throw Error("oversample_minority: labels contain a single class");
    std::vector<std::size_t> out(labels.size());
    std::iota(out.begin(), out.end(), 0);
    const auto& minority = pos.size() < neg.size() ? pos : neg;
    const std::size_t extra = std::max(pos.size(), neg.size()) - minority.size();
    Rng rng(seed);
    for (std::size_t i = 0; i < extra; ++i) out.push_back(minority[rng.index(minority.size())]);
    return out;
}

}  // namespace arrkit::forecast
