#include "scc/problems.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "scc/errors.hpp"
#include "scc/rng.hpp"

namespace scc {

void Dataset::validate() const {
    if (n() < 1 || d() < 1) throw InvalidParamsError("Dataset: need n >= 1 and d >= 1");
    if (labels.size() != n()) throw DimensionError("Dataset: label count mismatch");
    if (!features.allFinite()) throw NonFiniteError("Dataset: non-finite feature");
    for (int i = 0; i < n(); ++i) {
        if (labels(i) != 1.0 && labels(i) != -1.0) {
            throw InvalidParamsError("Dataset: label not in {-1,+1}");
        }
    }
}

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double log1p_exp_neg(double z) {
    // log(1 + exp(-z)) without overflow on either tail
    if (z >= 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

class LogisticOracle final : public ObjectiveOracle {
public:
    LogisticOracle(Dataset data, double l2) : data_(std::move(data)), l2_(l2) {
        data_.validate();
        if (l2 < 0.0) throw InvalidParamsError("logistic: l2 must be nonnegative");
        double sum_cubes = 0.0;
        for (int i = 0; i < data_.n(); ++i) {
            double nrm = data_.features.row(i).norm();
            sum_cubes += nrm * nrm * nrm;
        }
        lipschitz_ = sum_cubes / (6.0 * std::sqrt(3.0) * data_.n());
    }

    int dim() const override { return data_.d(); }

    double value(const Vector& x) const override {
        Vector margins = data_.features * x;
        double total = 0.0;
        for (int i = 0; i < data_.n(); ++i) {
            total += log1p_exp_neg(data_.labels(i) * margins(i));
        }
        return total / data_.n() + 0.5 * l2_ * x.squaredNorm();
    }

    Vector gradient(const Vector& x) const override {
        Vector margins = data_.features * x;
        Vector weights(data_.n());
        for (int i = 0; i < data_.n(); ++i) {
            weights(i) = -data_.labels(i) * sigmoid(-data_.labels(i) * margins(i));
        }
        return data_.features.transpose() * weights / data_.n() + l2_ * x;
    }

    SymMatrix hessian(const Vector& x) const override {
        Vector margins = data_.features * x;
        Vector weights(data_.n());
        for (int i = 0; i < data_.n(); ++i) {
            double s = sigmoid(data_.labels(i) * margins(i));
            weights(i) = s * (1.0 - s);
        }
        Matrix h = data_.features.transpose() * weights.asDiagonal() * data_.features /
                       data_.n() +
                   l2_ * Matrix::Identity(dim(), dim());
        return SymMatrix(h);
    }

    Vector hessian_vector(const Vector& x, const Vector& v) const override {
        Vector margins = data_.features * x;
        Vector av = data_.features * v;
        for (int i = 0; i < data_.n(); ++i) {
            double s = sigmoid(data_.labels(i) * margins(i));
            av(i) *= s * (1.0 - s);
        }
        return data_.features.transpose() * av / data_.n() + l2_ * v;
    }

    double lipschitz_hessian_bound() const override { return lipschitz_; }

    std::string name() const override { return "logistic[" + data_.name + "]"; }

private:
    Dataset data_;
    double l2_;
    double lipschitz_;
};

class QuadraticOracle final : public ObjectiveOracle {
public:
    QuadraticOracle(SymMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
        if (b_.size() != a_.dim()) throw DimensionError("quadratic: b dimension mismatch");
    }

    int dim() const override { return a_.dim(); }
    double value(const Vector& x) const override {
        return 0.5 * x.dot(a_.mat() * x) + b_.dot(x);
    }
    Vector gradient(const Vector& x) const override { return a_.mat() * x + b_; }
    SymMatrix hessian(const Vector&) const override { return a_; }
    Vector hessian_vector(const Vector&, const Vector& v) const override {
        return a_.mat() * v;
    }
    double lipschitz_hessian_bound() const override { return 0.0; }
    std::string name() const override { return "quadratic"; }

private:
    SymMatrix a_;
    Vector b_;
};

class RosenbrockOracle final : public ObjectiveOracle {
public:
    explicit RosenbrockOracle(int d) : d_(d) {
        if (d < 2) throw InvalidParamsError("rosenbrock: need d >= 2");
    }

    int dim() const override { return d_; }

    double value(const Vector& x) const override {
        double total = 0.0;
        for (int i = 0; i + 1 < d_; ++i) {
            double a = x(i + 1) - x(i) * x(i);
            double b = 1.0 - x(i);
            total += 100.0 * a * a + b * b;
        }
        return total;
    }

    Vector gradient(const Vector& x) const override {
        Vector g = Vector::Zero(d_);
        for (int i = 0; i + 1 < d_; ++i) {
            double a = x(i + 1) - x(i) * x(i);
            g(i) += -400.0 * x(i) * a - 2.0 * (1.0 - x(i));
            g(i + 1) += 200.0 * a;
        }
        return g;
    }

    SymMatrix hessian(const Vector& x) const override {
        Matrix h = Matrix::Zero(d_, d_);
        for (int i = 0; i + 1 < d_; ++i) {
            h(i, i) += -400.0 * x(i + 1) + 1200.0 * x(i) * x(i) + 2.0;
            h(i, i + 1) += -400.0 * x(i);
            h(i + 1, i) += -400.0 * x(i);
            h(i + 1, i + 1) += 200.0;
        }
        return SymMatrix(h);
    }

    // |d3f[u,u,u]| <= 2400|x_i| |u_i|^3 + 1200 u_i^2 |u_{i+1}| summed, which on
    // ||x|| <= 10 and ||u|| = 1 is at most 24000 + 1200.
    double lipschitz_hessian_bound() const override { return 25200.0; }

    std::string name() const override { return "rosenbrock"; }

private:
    int d_;
};

class SumOfCubicsOracle final : public ObjectiveOracle {
public:
    explicit SumOfCubicsOracle(int d) : d_(d) {
        if (d < 1) throw InvalidParamsError("sum_of_cubics: need d >= 1");
    }

    int dim() const override { return d_; }
    double value(const Vector& x) const override { return x.array().cube().sum() / 6.0; }
    Vector gradient(const Vector& x) const override {
        return 0.5 * x.array().square().matrix();
    }
    SymMatrix hessian(const Vector& x) const override {
        return SymMatrix::from_diagonal(x);
    }
    Vector hessian_vector(const Vector& x, const Vector& v) const override {
        return x.cwiseProduct(v);
    }
    double lipschitz_hessian_bound() const override { return 1.0; }
    std::string name() const override { return "sum_of_cubics"; }

private:
    int d_;
};

}  // namespace

OraclePtr make_logistic_oracle(Dataset data, double l2) {
    return std::make_shared<LogisticOracle>(std::move(data), l2);
}

OraclePtr make_quadratic_oracle(SymMatrix a, Vector b) {
    return std::make_shared<QuadraticOracle>(std::move(a), std::move(b));
}

OraclePtr make_rosenbrock_oracle(int d) { return std::make_shared<RosenbrockOracle>(d); }

OraclePtr make_sum_of_cubics_oracle(int d) {
    return std::make_shared<SumOfCubicsOracle>(d);
}

Dataset gen_synthetic(int n, int d, uint64_t seed) {
    if (n < 1 || d < 1) throw InvalidParamsError("gen_synthetic: need n, d >= 1");
    Rng rng(seed);
    Vector truth(d);
    for (int j = 0; j < d; ++j) truth(j) = rng.gaussian();

    Dataset data;
    data.features.resize(n, d);
    data.labels.resize(n);
    data.name = "synthetic(n=" + std::to_string(n) + ",d=" + std::to_string(d) +
                ",seed=" + std::to_string(seed) + ")";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) data.features(i, j) = rng.gaussian();
        double score = data.features.row(i).dot(truth);
        double label = score > 0.0 ? 1.0 : -1.0;
        if (rng.uniform01() < 0.05) label = -label;
        data.labels(i) = label;
    }
    return data;
}

namespace {

struct SparseRow {
    double label;
    std::vector<std::pair<long, double>> entries;
};

}  // namespace

Dataset parse_libsvm(std::istream& in, const std::string& name) {
    std::vector<SparseRow> rows;
    long max_index = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream tokens(line);
        std::string tok;
        if (!(tokens >> tok)) continue;  // blank line

        SparseRow row;
        try {
            size_t pos = 0;
            double raw = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument("trailing bytes");
            row.label = raw > 0.0 ? 1.0 : -1.0;
        } catch (const std::exception&) {
            throw ParseError(lineno, "missing or malformed label '" + tok + "'");
        }

        long prev_index = 0;
        while (tokens >> tok) {
            size_t colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
                throw ParseError(lineno, "malformed feature token '" + tok + "'");
            }
            long index;
            double value;
            try {
                size_t pos = 0;
                index = std::stol(tok.substr(0, colon), &pos);
                if (pos != colon) throw std::invalid_argument("trailing bytes in index");
                pos = 0;
                std::string val_str = tok.substr(colon + 1);
                value = std::stod(val_str, &pos);
                if (pos != val_str.size()) throw std::invalid_argument("trailing bytes in value");
            } catch (const std::exception&) {
                throw ParseError(lineno, "malformed feature token '" + tok + "'");
            }
            if (index < 1) throw ParseError(lineno, "index must be >= 1");
            if (index <= prev_index) {
                throw ParseError(lineno, "non-increasing feature index");
            }
            prev_index = index;
            max_index = std::max(max_index, index);
            row.entries.emplace_back(index, value);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(0, "no samples in stream");

    Dataset data;
    data.features = Matrix::Zero(static_cast<long>(rows.size()), max_index);
    data.labels.resize(static_cast<long>(rows.size()));
    data.name = name;
    for (size_t i = 0; i < rows.size(); ++i) {
        data.labels(static_cast<long>(i)) = rows[i].label;
        for (const auto& [index, value] : rows[i].entries) {
            data.features(static_cast<long>(i), index - 1) = value;
        }
    }
    data.validate();
    return data;
}

Dataset parse_libsvm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);
    return parse_libsvm(in, path);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
    char buf[64];
    for (int i = 0; i < data.n(); ++i) {
        out << (data.labels(i) > 0 ? "+1" : "-1");
        for (int j = 0; j < data.d(); ++j) {
            double v = data.features(i, j);
            if (v != 0.0) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << ' ' << (j + 1) << ':' << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace scc
