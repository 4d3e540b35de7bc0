#include "liq/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liq {

bool Box::contains(const Point& y) const {
    for (int a = 0; a < dim; ++a)
        if (y[a] < lo[a] || y[a] > hi[a]) return false;
    return true;
}

double softclip(double raw, double floor, double cap, double width) {
    if (!(floor < cap)) throw std::invalid_argument("softclip: floor must be below cap");
    if (width < 0.0 || 2.0 * width > cap - floor)
        throw std::invalid_argument("softclip: transition width too large for band");
    if (width == 0.0) return std::clamp(raw, floor, cap);
    if (raw >= cap + width) return cap;
    if (raw > cap - width) {
        const double d = cap + width - raw;
        return cap - d * d / (4.0 * width);
    }
    if (raw <= floor - width) return floor;
    if (raw < floor + width) {
        const double d = raw - (floor - width);
        return floor + d * d / (4.0 * width);
    }
    return raw;
}

double ScalarField::operator()(const Point& y) const {
    switch (form_) {
        case Form::Constant:
            return p0_;
        case Form::Affine: {
            double v = p0_;
            for (int a = 0; a < y.dim; ++a) v += lin_[static_cast<std::size_t>(a)] * y[a];
            return v;
        }
        case Form::LogisticLinear: {
            double z = p2_;
            for (int a = 0; a < y.dim; ++a) z += lin_[static_cast<std::size_t>(a)] * y[a];
            return p0_ + p1_ / (1.0 + std::exp(-z));
        }
        case Form::Tabulated: {
            const double x = y[axis_];
            if (x <= knots_.front()) return values_.front();
            if (x >= knots_.back()) return values_.back();
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
            const double w = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
            return values_[i - 1] + w * (values_[i] - values_[i - 1]);
        }
        case Form::Clipped:
            return softclip((*inner_)(y), p0_, p1_, p2_);
    }
    return 0.0;
}

ScalarField ScalarField::constant(double value) {
    ScalarField f;
    f.form_ = Form::Constant;
    f.p0_ = value;
    return f;
}

ScalarField ScalarField::affine(double a0, const std::array<double, kMaxDim>& lin) {
    ScalarField f;
    f.form_ = Form::Affine;
    f.p0_ = a0;
    f.lin_ = lin;
    return f;
}

ScalarField ScalarField::logistic_linear(double base, double scale,
                                         const std::array<double, kMaxDim>& w, double bias) {
    ScalarField f;
    f.form_ = Form::LogisticLinear;
    f.p0_ = base;
    f.p1_ = scale;
    f.p2_ = bias;
    f.lin_ = w;
    return f;
}

ScalarField ScalarField::tabulated(int axis, std::vector<double> knots, std::vector<double> values) {
    if (knots.size() < 2 || knots.size() != values.size())
        throw std::invalid_argument("tabulated: need >= 2 knots with matching values");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("tabulated: knots must be strictly increasing");
    ScalarField f;
    f.form_ = Form::Tabulated;
    f.axis_ = axis;
    f.knots_ = std::move(knots);
    f.values_ = std::move(values);
    return f;
}

ScalarField ScalarField::clipped(double floor, double cap, double width) const {
    if (!(floor < cap)) throw std::invalid_argument("clipped: floor must be below cap");
    if (width < 0.0 || 2.0 * width > cap - floor)
        throw std::invalid_argument("clipped: transition width too large for band");
    ScalarField f;
    f.form_ = Form::Clipped;
    f.p0_ = floor;
    f.p1_ = cap;
    f.p2_ = width;
    f.inner_ = std::make_shared<ScalarField>(*this);
    return f;
}

bool ScalarField::is_constant() const { return form_ == Form::Constant; }

double ScalarField::constant_value() const {
    if (!is_constant()) throw std::logic_error("constant_value on non-constant field");
    return p0_;
}

ScalarField clip_coefficients(const ScalarField& raw, double floor, double cap, double width) {
    return raw.clipped(floor, cap, width);
}

MatrixField MatrixField::constant(int d, int n, std::vector<double> entries) {
    if (d <= 0 || n <= 0 || entries.size() != static_cast<std::size_t>(d * n))
        throw std::invalid_argument("MatrixField::constant: bad shape");
    MatrixField m;
    m.rows_ = d;
    m.cols_ = n;
    m.entries_ = std::move(entries);
    return m;
}

MatrixField MatrixField::diagonal(std::vector<ScalarField> diag) {
    if (diag.empty()) throw std::invalid_argument("MatrixField::diagonal: empty");
    MatrixField m;
    m.rows_ = m.cols_ = static_cast<int>(diag.size());
    m.diagonal_ = true;
    m.fields_ = std::move(diag);
    return m;
}

void MatrixField::eval(const Point& y, double* out) const {
    const std::size_t total = static_cast<std::size_t>(rows_ * cols_);
    if (diagonal_) {
        std::fill(out, out + total, 0.0);
        for (int i = 0; i < rows_; ++i)
            out[static_cast<std::size_t>(i * cols_ + i)] = fields_[static_cast<std::size_t>(i)](y);
        return;
    }
    std::copy(entries_.begin(), entries_.end(), out);
}

}  // namespace liq
