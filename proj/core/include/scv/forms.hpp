#pragma once

#include "scv/poincare.hpp"
#include "scv/qseries.hpp"
#include "scv/sum_control.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scv {

// A cusp form described by weight, level and a coefficient source.
struct FormSpec {
    enum class Source { eta_product, poincare_lifted, explicit_series };

    Source source = Source::eta_product;
    int weight = 0;
    long level = 1;

    long eta_power = 0, eta_scale = 0; // source = eta_product
    long m = 0;                        // source = poincare_lifted
    QSeries series;                    // source = explicit_series

    static FormSpec eta(long power, long scale);
    static FormSpec poincare(long m, int k, long N);
    static FormSpec from_series(int weight, long level, QSeries s);

    // Grammar: "eta:POWER:SCALE" | "poincare:M:K:N" | "file:PATH".
    // File-backed specs carry no weight of their own, so one must be passed.
    static FormSpec parse(const std::string& text, std::optional<int> weight_hint = {},
                          std::optional<long> level_hint = {});

    std::string label() const;
};

// Dense coefficient table a(1..nmax) in doubles; a(n) outside the build range
// is an error, never zero.
class CoefficientTable {
public:
    CoefficientTable() = default;
    CoefficientTable(std::vector<double> a, int weight, long level, std::string label)
        : a_(std::move(a)), weight_(weight), level_(level), label_(std::move(label)) {}

    long nmax() const { return long(a_.size()) - 1; }
    int weight() const { return weight_; }
    long level() const { return level_; }
    const std::string& label() const { return label_; }

    double operator()(long n) const {
        if (n < 1) return 0.0;
        if (n >= long(a_.size()))
            throw std::out_of_range("CoefficientTable: coefficient beyond table bound requested");
        return a_[size_t(n)];
    }
    const std::vector<double>& raw() const { return a_; }

private:
    std::vector<double> a_; // a_[0] unused
    int weight_ = 0;
    long level_ = 1;
    std::string label_;
};

// Floating bulk builders; O(nmax^1.5) eta passes, no dense*dense products.
std::vector<double> eta_power_table(long power, long scale, long nmax);
std::vector<double> eisenstein_table(int k, long nmax);

CoefficientTable build_table(const FormSpec& spec, long nmax, const SumControl& control = {});

} // namespace scv
