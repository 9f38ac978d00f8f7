#include "pearl/statlearn/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pearl/core/error.hpp"
#include "pearl/core/rng.hpp"

namespace pearl::statlearn {

namespace {

using Matrix = std::vector<std::vector<double>>;

struct Scaling {
    std::vector<double> mean;
    std::vector<double> scale;
};

Scaling fit_scaling(const Matrix& x) {
    const std::size_t d = x.front().size();
    Scaling s{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    const double n = static_cast<double>(x.size());
    for (const auto& row : x) {
        for (std::size_t k = 0; k < d; ++k) s.mean[k] += row[k];
    }
    for (auto& m : s.mean) m /= n;
    std::vector<double> var(d, 0.0);
    for (const auto& row : x) {
        for (std::size_t k = 0; k < d; ++k) {
            double c = row[k] - s.mean[k];
            var[k] += c * c;
        }
    }
    for (std::size_t k = 0; k < d; ++k) {
        double sd = std::sqrt(var[k] / n);
        s.scale[k] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
}

Matrix apply_scaling(const Matrix& x, const Scaling& s) {
    Matrix out(x.size(), std::vector<double>(s.mean.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < s.mean.size(); ++k) {
            out[i][k] = (x[i][k] - s.mean[k]) / s.scale[k];
        }
    }
    return out;
}

double rbf(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return std::exp(-gamma * s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double projected_gradient(double g, double alpha, double upper) {
    if (alpha <= 0.0) return std::min(g, 0.0);
    if (alpha >= upper) return std::max(g, 0.0);
    return g;
}

/// Dual coordinate ascent for the L1-loss SVM with the bias absorbed into
/// an augmented constant feature. Returns the dual variables.
std::vector<double> solve_linear(const Matrix& x, const std::vector<double>& y,
                                 const std::vector<double>& upper, const SvmOptions& opt,
                                 Rng& rng, BinaryMachine& out) {
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    std::vector<double> qii(n);
    for (std::size_t i = 0; i < n; ++i) qii[i] = dot(x[i], x[i]) + 1.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (int pass = 0; pass < opt.max_passes; ++pass) {
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        double violation = 0.0;
        for (std::size_t i : order) {
            double g = y[i] * (dot(w, x[i]) + b) - 1.0;
            double pg = projected_gradient(g, alpha[i], upper[i]);
            violation = std::max(violation, std::abs(pg));
            if (std::abs(pg) < 1e-12) continue;
            double old = alpha[i];
            alpha[i] = std::clamp(old - g / qii[i], 0.0, upper[i]);
            double delta = (alpha[i] - old) * y[i];
            if (delta == 0.0) continue;
            for (std::size_t k = 0; k < d; ++k) w[k] += delta * x[i][k];
            b += delta;
        }
        if (violation < opt.tolerance) break;
    }
    out.weights = std::move(w);
    out.bias = b;
    return alpha;
}

std::vector<double> solve_kernel(const std::vector<double>& gram, const std::vector<double>& y,
                                 const std::vector<double>& upper, const SvmOptions& opt,
                                 Rng& rng) {
    const std::size_t n = y.size();
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // (Q alpha)_i - 1
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    for (int pass = 0; pass < opt.max_passes; ++pass) {
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        double violation = 0.0;
        for (std::size_t i : order) {
            double pg = projected_gradient(grad[i], alpha[i], upper[i]);
            violation = std::max(violation, std::abs(pg));
            if (std::abs(pg) < 1e-12) continue;
            const double qii = gram[i * n + i] + 1.0;
            double old = alpha[i];
            alpha[i] = std::clamp(old - grad[i] / qii, 0.0, upper[i]);
            double delta = alpha[i] - old;
            if (delta == 0.0) continue;
            const double* row = &gram[i * n];
            for (std::size_t j = 0; j < n; ++j) grad[j] += delta * y[i] * y[j] * (row[j] + 1.0);
        }
        if (violation < opt.tolerance) break;
    }
    return alpha;
}

/// Trains on standardized rows `rows` of `x`; scaling is passed through.
ClassifierModel train_fixed(const Matrix& x_std, const std::vector<int>& labels,
                            const std::vector<std::size_t>& rows, Kernel kernel, double C,
                            double gamma, const Scaling& scaling, const SvmOptions& opt) {
    ClassifierModel model;
    model.kernel = kernel;
    model.dim = x_std.front().size();
    model.mean = scaling.mean;
    model.scale = scaling.scale;
    model.gamma = gamma;
    model.C = C;

    std::map<int, std::size_t> counts;
    for (auto r : rows) ++counts[labels[r]];
    for (const auto& [label, cnt] : counts) model.classes.push_back(label);
    const double n = static_cast<double>(rows.size());
    const double k = static_cast<double>(model.classes.size());
    std::map<int, double> weight;
    for (const auto& [label, cnt] : counts) weight[label] = n / (k * static_cast<double>(cnt));

    Matrix x;
    x.reserve(rows.size());
    std::vector<double> upper;
    upper.reserve(rows.size());
    for (auto r : rows) {
        x.push_back(x_std[r]);
        upper.push_back(C * weight[labels[r]]);
    }

    std::vector<double> gram;
    if (kernel == Kernel::rbf) {
        gram.assign(x.size() * x.size(), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            gram[i * x.size() + i] = 1.0;
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                double v = rbf(x[i], x[j], gamma);
                gram[i * x.size() + j] = v;
                gram[j * x.size() + i] = v;
            }
        }
    }

    // Two classes need a single machine (positive = classes[1]).
    const std::size_t n_machines = model.classes.size() == 2 ? 1 : model.classes.size();
    std::vector<std::vector<double>> duals;
    std::vector<std::vector<double>> ys;
    Rng rng(opt.seed);
    for (std::size_t m = 0; m < n_machines; ++m) {
        const int positive = model.classes.size() == 2 ? model.classes[1] : model.classes[m];
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < rows.size(); ++i) y[i] = labels[rows[i]] == positive ? 1.0 : -1.0;
        BinaryMachine machine;
        if (kernel == Kernel::linear) {
            solve_linear(x, y, upper, opt, rng, machine);
        } else {
            duals.push_back(solve_kernel(gram, y, upper, opt, rng));
        }
        ys.push_back(std::move(y));
        model.machines.push_back(std::move(machine));
    }

    if (kernel == Kernel::rbf) {
        std::vector<std::size_t> sv;
        for (std::size_t i = 0; i < x.size(); ++i) {
            bool used = false;
            for (const auto& a : duals) used = used || a[i] > 0.0;
            if (used) sv.push_back(i);
        }
        for (auto i : sv) model.support_vectors.push_back(x[i]);
        for (std::size_t m = 0; m < n_machines; ++m) {
            auto& machine = model.machines[m];
            machine.bias = 0.0;
            for (auto i : sv) {
                double c = duals[m][i] * ys[m][i];
                machine.coef.push_back(c);
                machine.bias += c;
            }
        }
    }
    return model;
}

double gamma_heuristic(const Matrix& x_std) {
    const std::size_t d = x_std.front().size();
    double sum = 0.0;
    double sq = 0.0;
    double count = 0.0;
    for (const auto& row : x_std) {
        for (double v : row) {
            sum += v;
            sq += v * v;
            count += 1.0;
        }
    }
    double mean = sum / count;
    double var = sq / count - mean * mean;
    if (!(var > 1e-12)) return 1.0;
    return 1.0 / (static_cast<double>(d) * var);
}

}  // namespace

KernelChoice parse_kernel(const std::string& name) {
    if (name == "linear") return KernelChoice::linear;
    if (name == "rbf") return KernelChoice::rbf;
    if (name == "auto" || name == "automatic") return KernelChoice::automatic;
    throw InvalidArgument("unknown kernel '" + name + "'");
}

const char* to_string(Kernel k) { return k == Kernel::linear ? "linear" : "rbf"; }

const char* to_string(KernelChoice k) {
    switch (k) {
        case KernelChoice::linear: return "linear";
        case KernelChoice::rbf: return "rbf";
        case KernelChoice::automatic: return "auto";
    }
    return "?";
}

namespace {

double machine_value(const ClassifierModel& model, const BinaryMachine& m,
                     std::span<const double> x) {
    double f = m.bias;
    if (model.kernel == Kernel::linear) {
        for (std::size_t k = 0; k < model.dim; ++k) {
            f += m.weights[k] * (x[k] - model.mean[k]) / model.scale[k];
        }
        return f;
    }
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        double s = 0.0;
        const auto& sv = model.support_vectors[i];
        for (std::size_t k = 0; k < model.dim; ++k) {
            double d = sv[k] - (x[k] - model.mean[k]) / model.scale[k];
            s += d * d;
        }
        f += m.coef[i] * std::exp(-model.gamma * s);
    }
    return f;
}

void check_dim(const ClassifierModel& model, std::span<const double> x) {
    if (x.size() != model.dim) {
        throw DimensionMismatch("expected " + std::to_string(model.dim) + " features, got " +
                                std::to_string(x.size()));
    }
}

}  // namespace

std::vector<double> ClassifierModel::decision_values(std::span<const double> x) const {
    check_dim(*this, x);
    std::vector<double> values;
    values.reserve(classes.size());
    for (const auto& m : machines) values.push_back(machine_value(*this, m, x));
    if (classes.size() == 2 && values.size() == 1) values.insert(values.begin(), -values[0]);
    return values;
}

std::size_t ClassifierModel::predict_index(std::span<const double> x) const {
    check_dim(*this, x);
    if (classes.size() == 2 && machines.size() == 1) {
        // Values are (-f, f); ties go to the lower label.
        return machine_value(*this, machines[0], x) > 0.0 ? 1 : 0;
    }
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < machines.size(); ++i) {
        double v = machine_value(*this, machines[i], x);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

int svm_predict(const ClassifierModel& model, std::span<const double> x) {
    return model.predict(x);
}

double balanced_accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
    std::map<int, std::pair<double, double>> per_class;  // hits, total
    for (std::size_t i = 0; i < truth.size(); ++i) {
        auto& [hit, total] = per_class[truth[i]];
        total += 1.0;
        if (predicted[i] == truth[i]) hit += 1.0;
    }
    if (per_class.empty()) return 0.0;
    double s = 0.0;
    for (const auto& [label, ht] : per_class) s += ht.first / ht.second;
    return s / static_cast<double>(per_class.size());
}

SvmFit svm_train_fit(const Matrix& features, const std::vector<int>& labels,
                     const SvmOptions& options) {
    if (features.empty() || features.size() != labels.size()) {
        throw InvalidArgument("features and labels must be non-empty and equally long");
    }
    const std::size_t d = features.front().size();
    if (d == 0) throw InvalidArgument("features must have at least one dimension");
    for (const auto& row : features) {
        if (row.size() != d) throw DimensionMismatch("feature rows differ in length");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    if (by_class.size() < 2) throw SingleClass("need at least two distinct labels");
    if (options.candidate_Cs.empty()) throw InvalidArgument("candidate C list is empty");

    const Scaling scaling = fit_scaling(features);
    const Matrix x_std = apply_scaling(features, scaling);
    const double gamma = gamma_heuristic(x_std);

    std::vector<double> Cs = options.candidate_Cs;
    std::sort(Cs.begin(), Cs.end());

    std::size_t smallest = std::numeric_limits<std::size_t>::max();
    for (const auto& [label, idx] : by_class) smallest = std::min(smallest, idx.size());

    std::vector<Kernel> kernels;
    switch (options.kernel) {
        case KernelChoice::linear: kernels = {Kernel::linear}; break;
        case KernelChoice::rbf: kernels = {Kernel::rbf}; break;
        case KernelChoice::automatic: kernels = {Kernel::linear, Kernel::rbf}; break;
    }

    Kernel best_kernel = kernels.front();
    double best_C = Cs[(Cs.size() - 1) / 2];
    double best_score = -1.0;

    if (smallest >= 2) {
        const std::size_t folds = std::min<std::size_t>(3, smallest);
        std::vector<std::size_t> fold_of(labels.size());
        Rng rng(options.seed);
        for (auto& [label, idx] : by_class) {
            std::vector<std::size_t> shuffled = idx;
            for (std::size_t i = shuffled.size(); i > 1; --i) {
                std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
            }
            for (std::size_t p = 0; p < shuffled.size(); ++p) fold_of[shuffled[p]] = p % folds;
        }
        for (Kernel kernel : kernels) {
            for (double C : Cs) {
                double total = 0.0;
                for (std::size_t f = 0; f < folds; ++f) {
                    std::vector<std::size_t> train;
                    std::vector<std::size_t> held;
                    for (std::size_t i = 0; i < labels.size(); ++i) {
                        (fold_of[i] == f ? held : train).push_back(i);
                    }
                    auto model = train_fixed(x_std, labels, train, kernel, C, gamma, scaling, options);
                    std::vector<int> truth;
                    std::vector<int> pred;
                    for (auto i : held) {
                        truth.push_back(labels[i]);
                        pred.push_back(model.predict(features[i]));
                    }
                    total += balanced_accuracy(truth, pred);
                }
                double score = total / static_cast<double>(folds);
                if (score > best_score + 1e-12) {
                    best_score = score;
                    best_kernel = kernel;
                    best_C = C;
                }
            }
        }
    }

    std::vector<std::size_t> all(labels.size());
    std::iota(all.begin(), all.end(), 0);
    SvmFit fit;
    fit.model = train_fixed(x_std, labels, all, best_kernel, best_C, gamma, scaling, options);
    fit.cv_score = best_score;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (fit.model.predict(features[i]) == labels[i]) ++hits;
    }
    fit.training_accuracy = static_cast<double>(hits) / static_cast<double>(labels.size());
    return fit;
}

ClassifierModel svm_train(const Matrix& features, const std::vector<int>& labels,
                          const SvmOptions& options) {
    return svm_train_fit(features, labels, options).model;
}

void to_json(nlohmann::json& j, const ClassifierModel& m) {
    j = nlohmann::json::object();
    j["kernel"] = to_string(m.kernel);
    j["dim"] = m.dim;
    j["mean"] = m.mean;
    j["scale"] = m.scale;
    j["gamma"] = m.gamma;
    j["C"] = m.C;
    j["classes"] = m.classes;
    j["support_vectors"] = m.support_vectors;
    auto machines = nlohmann::json::array();
    for (const auto& mach : m.machines) {
        machines.push_back({{"weights", mach.weights}, {"coef", mach.coef}, {"bias", mach.bias}});
    }
    j["machines"] = std::move(machines);
}

void from_json(const nlohmann::json& j, ClassifierModel& m) {
    const std::string kernel = j.at("kernel").get<std::string>();
    if (kernel == "linear") {
        m.kernel = Kernel::linear;
    } else if (kernel == "rbf") {
        m.kernel = Kernel::rbf;
    } else {
        throw MalformedInput("unknown kernel '" + kernel + "'");
    }
    m.dim = j.at("dim").get<std::size_t>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.scale = j.at("scale").get<std::vector<double>>();
    m.gamma = j.at("gamma").get<double>();
    m.C = j.at("C").get<double>();
    m.classes = j.at("classes").get<std::vector<int>>();
    m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    m.machines.clear();
    for (const auto& mj : j.at("machines")) {
        BinaryMachine mach;
        mach.weights = mj.at("weights").get<std::vector<double>>();
        mach.coef = mj.at("coef").get<std::vector<double>>();
        mach.bias = mj.at("bias").get<double>();
        m.machines.push_back(std::move(mach));
    }
    const bool shape_ok =
        m.mean.size() == m.dim && m.scale.size() == m.dim && m.classes.size() >= 2 &&
        m.machines.size() == (m.classes.size() == 2 ? 1 : m.classes.size());
    if (!shape_ok) throw MalformedInput("classifier arrays are inconsistent");
    for (const auto& mach : m.machines) {
        if (m.kernel == Kernel::linear && mach.weights.size() != m.dim) {
            throw MalformedInput("linear machine weight length mismatch");
        }
        if (m.kernel == Kernel::rbf && mach.coef.size() != m.support_vectors.size()) {
            throw MalformedInput("rbf machine coefficient length mismatch");
        }
    }
    for (const auto& sv : m.support_vectors) {
        if (sv.size() != m.dim) throw MalformedInput("support vector length mismatch");
    }
}

}  // namespace pearl::statlearn
