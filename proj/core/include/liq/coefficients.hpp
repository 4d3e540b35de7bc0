#pragma once

#include <array>
#include <memory>
#include <vector>

namespace liq {

// Reference grids cover d in {1,2}; nothing below hard-codes d=1, and the
// fixed-capacity point keeps coefficient evaluation allocation-free in the
// Monte Carlo hot loops.
inline constexpr int kMaxDim = 4;

struct Point {
    std::array<double, kMaxDim> coords{};
    int dim = 1;

    static Point of(double y0) { return Point{{y0, 0, 0, 0}, 1}; }
    static Point of(double y0, double y1) { return Point{{y0, y1, 0, 0}, 2}; }

    double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
};

struct Box {
    Point lo;
    Point hi;
    int dim = 1;

    bool contains(const Point& y) const;
    double width(int axis) const { return hi[axis] - lo[axis]; }
};

// C1 soft clamp to [floor, cap]. Identity on [floor+width, cap-width],
// quadratic blend on the transition bands, constant beyond them. width = 0
// degenerates to a hard clamp.
double softclip(double raw, double floor, double cap, double width);

// Scalar coefficient over the factor domain. Only named analytic forms (or
// tables) are accepted; validation needs functions it can sample safely.
class ScalarField {
public:
    ScalarField() = default;  // constant zero

    double operator()(const Point& y) const;

    static ScalarField constant(double value);
    // a0 + <lin, y>; unbounded, meant to be wrapped by clipped()
    static ScalarField affine(double a0, const std::array<double, kMaxDim>& lin);
    // base + scale / (1 + exp(-(<w, y> + bias)))
    static ScalarField logistic_linear(double base, double scale,
                                       const std::array<double, kMaxDim>& w, double bias);
    // piecewise-linear table of y[axis], clamped outside the knot range
    static ScalarField tabulated(int axis, std::vector<double> knots, std::vector<double> values);

    // softclip of this field; the only way to make an unbounded form admissible
    ScalarField clipped(double floor, double cap, double width) const;

    bool is_constant() const;
    double constant_value() const;

private:
    enum class Form { Constant, Affine, LogisticLinear, Tabulated, Clipped };

    Form form_ = Form::Constant;
    double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
    std::array<double, kMaxDim> lin_{};
    int axis_ = 0;
    std::vector<double> knots_, values_;
    std::shared_ptr<const ScalarField> inner_;
};

ScalarField clip_coefficients(const ScalarField& raw, double floor, double cap, double width);

// d x n diffusion matrix, row-major.
class MatrixField {
public:
    MatrixField() = default;

    static MatrixField constant(int d, int n, std::vector<double> entries);
    static MatrixField diagonal(std::vector<ScalarField> diag);

    void eval(const Point& y, double* out) const;  // out has rows()*cols() slots
    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_ = 0, cols_ = 0;
    bool diagonal_ = false;
    std::vector<double> entries_;
    std::vector<ScalarField> fields_;
};

}  // namespace liq
