#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pearl::statlearn {

enum class Kernel { linear, rbf };
/// Kernel requested at training time; `automatic` trains both and keeps the
/// better cross-validation score.
enum class KernelChoice { linear, rbf, automatic };

KernelChoice parse_kernel(const std::string& name);
const char* to_string(Kernel k);
const char* to_string(KernelChoice k);

/// One binary soft-margin machine. The bias is folded into the kernel
/// (K + 1), so the decision value is sum_i coef_i K(sv_i, x) + bias for the
/// RBF kernel and w.x + bias for the linear kernel.
struct BinaryMachine {
    std::vector<double> weights;  ///< linear: primal weight vector
    std::vector<double> coef;     ///< rbf: alpha_i * y_i per support vector
    double bias = 0.0;
};

/// Standardized one-vs-rest SVM. With two classes a single machine is stored
/// and decision values are (-f, f).
struct ClassifierModel {
    Kernel kernel = Kernel::linear;
    std::size_t dim = 0;
    std::vector<double> mean;
    std::vector<double> scale;
    double gamma = 1.0;
    double C = 1.0;
    std::vector<int> classes;
    std::vector<std::vector<double>> support_vectors;  ///< standardized, rbf only
    std::vector<BinaryMachine> machines;

    [[nodiscard]] std::vector<double> decision_values(std::span<const double> x) const;
    /// Index into `classes` of the predicted label.
    [[nodiscard]] std::size_t predict_index(std::span<const double> x) const;
    [[nodiscard]] int predict(std::span<const double> x) const {
        return classes[predict_index(x)];
    }
};

void to_json(nlohmann::json& j, const ClassifierModel& m);
void from_json(const nlohmann::json& j, ClassifierModel& m);

struct SvmOptions {
    KernelChoice kernel = KernelChoice::linear;
    std::vector<double> candidate_Cs{0.1, 1.0, 10.0, 100.0};
    double tolerance = 1e-3;
    int max_passes = 1000;
    std::uint64_t seed = 0x5eed;
};

struct SvmFit {
    ClassifierModel model;
    /// Mean balanced accuracy of the chosen C over the folds; negative when
    /// cross-validation was skipped.
    double cv_score = -1.0;
    double training_accuracy = 0.0;
};

/// Trains a one-vs-rest SVM with balanced class weights. C is chosen by
/// stratified k-fold CV with k = min(3, smallest class size); when the
/// smallest class has a single sample the (lower) median candidate is used.
SvmFit svm_train_fit(const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels, const SvmOptions& options = {});

ClassifierModel svm_train(const std::vector<std::vector<double>>& features,
                          const std::vector<int>& labels, const SvmOptions& options = {});

/// Throws DimensionMismatch when x has the wrong length.
int svm_predict(const ClassifierModel& model, std::span<const double> x);

/// Mean per-class recall.
double balanced_accuracy(const std::vector<int>& truth, const std::vector<int>& predicted);

}  // namespace pearl::statlearn
