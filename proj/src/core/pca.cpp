#include "core/pca.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "core/error.hpp"

namespace fusion {

namespace {

constexpr double kClampRatio = 1e-12;

void check_fit_args(const Eigen::MatrixXd& data, int k) {
    const auto n = data.rows(), d = data.cols();
    if (n < 2) raise(ErrorCode::DegenerateInput, "pca_fit: need at least 2 samples");
    if (k < 1 || k > std::min<Eigen::Index>(n - 1, d))
        raise(ErrorCode::DegenerateInput, "pca_fit: k out of range");
}

// Largest-magnitude entry positive; strict comparison picks the lowest
// index among ties.
void fix_sign(Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> components) {
    for (Eigen::Index r = 0; r < components.rows(); ++r) {
        Eigen::Index best = 0;
        double best_mag = -1.0;
        for (Eigen::Index c = 0; c < components.cols(); ++c) {
            const double mag = std::abs(components(r, c));
            if (mag > best_mag) {
                best_mag = mag;
                best = c;
            }
        }
        if (components(r, best) < 0.0) components.row(r) *= -1.0;
    }
}

void clamp_eigenvalues(PcaModel& model) {
    model.clamped.assign(static_cast<std::size_t>(model.eigenvalues.size()), false);
    if (model.eigenvalues.size() == 0) return;
    const double floor = kClampRatio * std::max(model.eigenvalues(0), 0.0);
    for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
        if (model.eigenvalues(i) < floor || model.eigenvalues(i) < 0.0) {
            model.eigenvalues(i) = 0.0;
            model.clamped[static_cast<std::size_t>(i)] = true;
        }
    }
}

} // namespace

PcaModel pca_fit_direct(const Eigen::MatrixXd& data, int k) {
    check_fit_args(data, k);
    const auto n = data.rows();
    PcaModel model;
    model.mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        raise(ErrorCode::DegenerateInput, "pca_fit: eigendecomposition failed");

    // Eigen returns ascending order; take the top k reversed.
    model.components.resize(k, data.cols());
    model.eigenvalues.resize(k);
    for (int i = 0; i < k; ++i) {
        const Eigen::Index src = cov.rows() - 1 - i;
        model.components.row(i) = solver.eigenvectors().col(src).transpose();
        model.eigenvalues(i) = solver.eigenvalues()(src);
    }
    fix_sign(model.components);
    clamp_eigenvalues(model);
    return model;
}

PcaModel pca_fit_gram(const Eigen::MatrixXd& data, int k) {
    check_fit_args(data, k);
    const auto n = data.rows();
    PcaModel model;
    model.mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - model.mean.transpose();
    const Eigen::MatrixXd gram = centered * centered.transpose() / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success)
        raise(ErrorCode::DegenerateInput, "pca_fit: eigendecomposition failed");

    model.components.resize(k, data.cols());
    model.eigenvalues.resize(k);
    for (int i = 0; i < k; ++i) {
        const Eigen::Index src = gram.rows() - 1 - i;
        const double lambda = solver.eigenvalues()(src);
        model.eigenvalues(i) = lambda;
        const Eigen::VectorXd u = solver.eigenvectors().col(src);
        Eigen::VectorXd v = centered.transpose() * u;
        const double scale = std::sqrt(std::max(lambda, 0.0) * static_cast<double>(n - 1));
        if (scale > 0.0 && v.norm() > 0.0)
            v /= scale;
        else if (v.norm() > 0.0)
            v.normalize();
        model.components.row(i) = v.transpose();
    }
    fix_sign(model.components);
    clamp_eigenvalues(model);
    return model;
}

PcaModel pca_fit(const Eigen::MatrixXd& data, int k) {
    return data.rows() < data.cols() ? pca_fit_gram(data, k) : pca_fit_direct(data, k);
}

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& v) {
    if (v.size() != model.dim())
        raise(ErrorCode::DimensionMismatch, "pca_project: vector dim mismatch");
    return model.components * (v - model.mean);
}

Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& coords) {
    if (coords.size() != model.component_count())
        raise(ErrorCode::DimensionMismatch, "pca_reconstruct: coordinate dim mismatch");
    return model.mean + model.components.transpose() * coords;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_row(std::ostream& out, const double* values, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) {
        if (i) out << ",";
        out << fmt(values[i]);
    }
    out << "\n";
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size() && !line.empty()) {
        std::size_t comma = line.find(',', pos);
        const std::string field =
            comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
        values.push_back(std::stod(field));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

std::string expect_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) raise(ErrorCode::DataError, std::string("pca model: missing ") + what);
    return line;
}

} // namespace

void save_pca_model(std::ostream& out, const PcaModel& model) {
    out << "fusionbench-pca v1 d=" << model.dim() << " k=" << model.component_count() << "\n";
    out << "MEAN\n";
    write_row(out, model.mean.data(), model.mean.size());
    out << "EIGENVALUES\n";
    write_row(out, model.eigenvalues.data(), model.eigenvalues.size());
    out << "COMPONENTS\n";
    for (Eigen::Index r = 0; r < model.components.rows(); ++r)
        write_row(out, model.components.row(r).data(), model.components.cols());
}

PcaModel load_pca_model(std::istream& in) {
    std::istringstream hs(expect_line(in, "header"));
    std::string magic, version, d_kv, k_kv;
    hs >> magic >> version >> d_kv >> k_kv;
    if (magic != "fusionbench-pca" || version != "v1" || d_kv.rfind("d=", 0) != 0 ||
        k_kv.rfind("k=", 0) != 0)
        raise(ErrorCode::DataError, "pca model: bad header");
    const Eigen::Index d = std::stol(d_kv.substr(2));
    const Eigen::Index k = std::stol(k_kv.substr(2));

    PcaModel model;
    if (expect_line(in, "MEAN") != "MEAN") raise(ErrorCode::DataError, "pca model: expected MEAN");
    auto mean = parse_row(expect_line(in, "mean row"));
    if (expect_line(in, "EIGENVALUES") != "EIGENVALUES")
        raise(ErrorCode::DataError, "pca model: expected EIGENVALUES");
    auto eigenvalues = parse_row(expect_line(in, "eigenvalue row"));
    if (expect_line(in, "COMPONENTS") != "COMPONENTS")
        raise(ErrorCode::DataError, "pca model: expected COMPONENTS");
    if (static_cast<Eigen::Index>(mean.size()) != d ||
        static_cast<Eigen::Index>(eigenvalues.size()) != k)
        raise(ErrorCode::DataError, "pca model: section size mismatch");

    model.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), d);
    model.eigenvalues = Eigen::Map<Eigen::VectorXd>(eigenvalues.data(), k);
    model.components.resize(k, d);
    for (Eigen::Index r = 0; r < k; ++r) {
        auto row = parse_row(expect_line(in, "component row"));
        if (static_cast<Eigen::Index>(row.size()) != d)
            raise(ErrorCode::DataError, "pca model: component row size mismatch");
        for (Eigen::Index c = 0; c < d; ++c) model.components(r, c) = row[static_cast<std::size_t>(c)];
    }
    clamp_eigenvalues(model);
    return model;
}

} // namespace fusion
