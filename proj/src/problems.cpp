#include "rarc/problems.hpp"

#include <cmath>

#include "rarc/error.hpp"

namespace rarc {

namespace {

class ClosedFormProblem : public Problem {
 public:
  ClosedFormProblem(std::string name, Index n, std::optional<double> f_star)
      : name_(std::move(name)), n_(n), f_star_(f_star) {}

  std::string name() const override { return name_; }
  Index dim() const override { return n_; }
  std::optional<double> optimal_value() const override { return f_star_; }

 protected:
  void check(const VectorXd& x) const {
    if (x.size() != n_) {
      throw DimensionError(name_ + ": expected dimension " + std::to_string(n_) + ", got " +
                           std::to_string(x.size()));
    }
  }

  std::string name_;
  Index n_;
  std::optional<double> f_star_;
};

class Arwhead final : public ClosedFormProblem {
 public:
  explicit Arwhead(Index n) : ClosedFormProblem("ARWHEAD", n, 0.0) {}

  double value(const VectorXd& x) const override {
    check(x);
    const double xn2 = x(n_ - 1) * x(n_ - 1);
    double f = 0.0;
    for (Index i = 0; i < n_ - 1; ++i) {
      const double t = x(i) * x(i) + xn2;
      f += (-4.0 * x(i) + 3.0) + t * t;
    }
    return f;
  }

  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    const double xn = x(n_ - 1);
    VectorXd g = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double t = x(i) * x(i) + xn * xn;
      g(i) = -4.0 + 4.0 * t * x(i);
      g(n_ - 1) += 4.0 * t * xn;
    }
    return g;
  }

  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    const double xn = x(n_ - 1);
    const double vn = v(n_ - 1);
    VectorXd hv = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double cross = 8.0 * x(i) * xn;
      hv(i) = 4.0 * (3.0 * x(i) * x(i) + xn * xn) * v(i) + cross * vn;
      hv(n_ - 1) += cross * v(i) + 4.0 * (x(i) * x(i) + 3.0 * xn * xn) * vn;
    }
    return hv;
  }

  VectorXd initial_point() const override { return VectorXd::Ones(n_); }
};

class Engval1 final : public ClosedFormProblem {
 public:
  explicit Engval1(Index n) : ClosedFormProblem("ENGVAL1", n, std::nullopt) {}

  double value(const VectorXd& x) const override {
    check(x);
    double f = 0.0;
    for (Index i = 0; i < n_ - 1; ++i) {
      const double t = x(i) * x(i) + x(i + 1) * x(i + 1);
      f += t * t - 4.0 * x(i) + 3.0;
    }
    return f;
  }

  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    VectorXd g = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double t = x(i) * x(i) + x(i + 1) * x(i + 1);
      g(i) += 4.0 * t * x(i) - 4.0;
      g(i + 1) += 4.0 * t * x(i + 1);
    }
    return g;
  }

  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    VectorXd hv = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double a = x(i);
      const double b = x(i + 1);
      const double t = a * a + b * b;
      const double cross = 8.0 * a * b;
      hv(i) += (4.0 * t + 8.0 * a * a) * v(i) + cross * v(i + 1);
      hv(i + 1) += cross * v(i) + (4.0 * t + 8.0 * b * b) * v(i + 1);
    }
    return hv;
  }

  VectorXd initial_point() const override { return VectorXd::Constant(n_, 2.0); }
};

class Power final : public ClosedFormProblem {
 public:
  explicit Power(Index n) : ClosedFormProblem("POWER", n, 0.0) {}

  double value(const VectorXd& x) const override {
    check(x);
    const double q = weighted(x);
    return q * q;
  }

  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    const double q = weighted(x);
    VectorXd g(n_);
    for (Index i = 0; i < n_; ++i) g(i) = 4.0 * q * static_cast<double>(i + 1) * x(i);
    return g;
  }

  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    // H = 4 q diag(i) + 8 w w^T with w_i = i x_i.
    const double q = weighted(x);
    double wv = 0.0;
    for (Index i = 0; i < n_; ++i) wv += static_cast<double>(i + 1) * x(i) * v(i);
    VectorXd hv(n_);
    for (Index i = 0; i < n_; ++i) {
      const double w = static_cast<double>(i + 1);
      hv(i) = 4.0 * q * w * v(i) + 8.0 * wv * w * x(i);
    }
    return hv;
  }

  VectorXd initial_point() const override { return VectorXd::Ones(n_); }

 private:
  double weighted(const VectorXd& x) const {
    double q = 0.0;
    for (Index i = 0; i < n_; ++i) q += static_cast<double>(i + 1) * x(i) * x(i);
    return q;
  }
};

class Cosine final : public ClosedFormProblem {
 public:
  explicit Cosine(Index n) : ClosedFormProblem("COSINE", n, -static_cast<double>(n - 1)) {}

  double value(const VectorXd& x) const override {
    check(x);
    double f = 0.0;
    for (Index i = 0; i < n_ - 1; ++i) f += std::cos(x(i) * x(i) - 0.5 * x(i + 1));
    return f;
  }

  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    VectorXd g = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double s = std::sin(x(i) * x(i) - 0.5 * x(i + 1));
      g(i) += -2.0 * x(i) * s;
      g(i + 1) += 0.5 * s;
    }
    return g;
  }

  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    VectorXd hv = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double a = x(i);
      const double u = a * a - 0.5 * x(i + 1);
      const double c = std::cos(u);
      const double s = std::sin(u);
      const double haa = -4.0 * a * a * c - 2.0 * s;
      const double hab = a * c;
      const double hbb = -0.25 * c;
      hv(i) += haa * v(i) + hab * v(i + 1);
      hv(i + 1) += hab * v(i) + hbb * v(i + 1);
    }
    return hv;
  }

  VectorXd initial_point() const override { return VectorXd::Ones(n_); }
};

class Nondquar final : public ClosedFormProblem {
 public:
  explicit Nondquar(Index n) : ClosedFormProblem("NONDQUAR", n, 0.0) {}

  double value(const VectorXd& x) const override {
    check(x);
    const double xn = x(n_ - 1);
    const double head = x(0) - x(1);
    const double tail = x(n_ - 2) + xn;
    double f = head * head + tail * tail;
    for (Index i = 0; i + 2 < n_; ++i) {
      const double p = x(i) + x(i + 1) + xn;
      f += p * p * p * p;
    }
    return f;
  }

  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    const double xn = x(n_ - 1);
    VectorXd g = VectorXd::Zero(n_);
    const double head = x(0) - x(1);
    g(0) += 2.0 * head;
    g(1) -= 2.0 * head;
    const double tail = x(n_ - 2) + xn;
    g(n_ - 2) += 2.0 * tail;
    g(n_ - 1) += 2.0 * tail;
    for (Index i = 0; i + 2 < n_; ++i) {
      const double p = x(i) + x(i + 1) + xn;
      const double d = 4.0 * p * p * p;
      g(i) += d;
      g(i + 1) += d;
      g(n_ - 1) += d;
    }
    return g;
  }

  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    const double xn = x(n_ - 1);
    VectorXd hv = VectorXd::Zero(n_);
    const double head = 2.0 * (v(0) - v(1));
    hv(0) += head;
    hv(1) -= head;
    const double tail = 2.0 * (v(n_ - 2) + v(n_ - 1));
    hv(n_ - 2) += tail;
    hv(n_ - 1) += tail;
    for (Index i = 0; i + 2 < n_; ++i) {
      const double p = x(i) + x(i + 1) + xn;
      // Every second derivative of p^4 within {i, i+1, n} equals 12 p^2.
      const double h = 12.0 * p * p * (v(i) + v(i + 1) + v(n_ - 1));
      hv(i) += h;
      hv(i + 1) += h;
      hv(n_ - 1) += h;
    }
    return hv;
  }

  VectorXd initial_point() const override {
    VectorXd x0(n_);
    for (Index i = 0; i < n_; ++i) x0(i) = i % 2 == 0 ? 1.0 : -1.0;
    return x0;
  }
};

class ChainedRosenbrock final : public ClosedFormProblem {
 public:
  explicit ChainedRosenbrock(Index n) : ClosedFormProblem("ROSENBROCK_CHAINED", n, 0.0) {}

  double value(const VectorXd& x) const override {
    check(x);
    double f = 0.0;
    for (Index i = 0; i < n_ - 1; ++i) {
      const double r = x(i + 1) - x(i) * x(i);
      const double s = 1.0 - x(i);
      f += 100.0 * r * r + s * s;
    }
    return f;
  }

  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    VectorXd g = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double r = x(i + 1) - x(i) * x(i);
      g(i) += -400.0 * x(i) * r - 2.0 * (1.0 - x(i));
      g(i + 1) += 200.0 * r;
    }
    return g;
  }

  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    VectorXd hv = VectorXd::Zero(n_);
    for (Index i = 0; i < n_ - 1; ++i) {
      const double a = x(i);
      const double haa = 1200.0 * a * a - 400.0 * x(i + 1) + 2.0;
      const double hab = -400.0 * a;
      hv(i) += haa * v(i) + hab * v(i + 1);
      hv(i + 1) += hab * v(i) + 200.0 * v(i + 1);
    }
    return hv;
  }

  VectorXd initial_point() const override {
    VectorXd x0(n_);
    for (Index i = 0; i < n_; ++i) x0(i) = i % 2 == 0 ? -1.2 : 1.0;
    return x0;
  }
};

class DiagonalQuadratic final : public ClosedFormProblem {
 public:
  explicit DiagonalQuadratic(Index n) : ClosedFormProblem("QUADRATIC_SPD", n, 0.0), c_(n) {
    for (Index i = 0; i < n; ++i) {
      c_(i) = n > 1 ? 1.0 + 9.0 * static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
    }
  }

  double value(const VectorXd& x) const override {
    check(x);
    return 0.5 * x.dot(c_.cwiseProduct(x));
  }
  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    return c_.cwiseProduct(x);
  }
  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    return c_.cwiseProduct(v);
  }
  VectorXd initial_point() const override { return VectorXd::Ones(n_); }

 private:
  VectorXd c_;
};

class Saddle final : public ClosedFormProblem {
 public:
  Saddle() : ClosedFormProblem("SADDLE", 2, -0.25) {}

  double value(const VectorXd& x) const override {
    check(x);
    const double y2 = x(1) * x(1);
    return 0.5 * (x(0) * x(0) - y2) + 0.25 * y2 * y2;
  }
  VectorXd gradient(const VectorXd& x) const override {
    check(x);
    return VectorXd{{x(0), -x(1) + x(1) * x(1) * x(1)}};
  }
  VectorXd hvp(const VectorXd& x, const VectorXd& v) const override {
    check(x);
    check(v);
    return VectorXd{{v(0), (-1.0 + 3.0 * x(1) * x(1)) * v(1)}};
  }
  VectorXd initial_point() const override { return VectorXd{{1.0, 0.0}}; }
};

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"ARWHEAD", "ENGVAL1", "POWER", "COSINE",
                                              "NONDQUAR", "ROSENBROCK_CHAINED", "QUADRATIC_SPD"};
  return names;
}

ProblemPtr builtin_problem(std::string_view name, Index d) {
  if (d < 2) throw DimensionError("built-in problems need d >= 2");
  if (name == "ARWHEAD") return std::make_shared<Arwhead>(d);
  if (name == "ENGVAL1") return std::make_shared<Engval1>(d);
  if (name == "POWER") return std::make_shared<Power>(d);
  if (name == "COSINE") return std::make_shared<Cosine>(d);
  if (name == "NONDQUAR") return std::make_shared<Nondquar>(d);
  if (name == "ROSENBROCK_CHAINED") return std::make_shared<ChainedRosenbrock>(d);
  if (name == "QUADRATIC_SPD") return std::make_shared<DiagonalQuadratic>(d);
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

ProblemPtr saddle_problem() { return std::make_shared<Saddle>(); }

std::string to_string(Rotation rotation) {
  return rotation == Rotation::AxisAligned ? "axis" : "haar";
}

Rotation parse_rotation(const std::string& name) {
  if (name == "axis") return Rotation::AxisAligned;
  if (name == "haar") return Rotation::HaarRotated;
  throw ConfigError("unknown rotation '" + name + "' (expected axis or haar)");
}

LowRankProblem::LowRankProblem(ProblemPtr base, Index d, Rotation rotation, std::uint64_t seed)
    : base_(std::move(base)), dim_(d), rotation_(rotation) {
  if (!base_) throw ParameterError("low-rank wrapper needs a base problem");
  const Index r = base_->dim();
  if (d < r) {
    throw DimensionError("low-rank wrapper needs d >= base dimension, got d=" + std::to_string(d) +
                         " r=" + std::to_string(r));
  }
  if (rotation_ == Rotation::AxisAligned) {
    a_ = MatrixXd::Identity(r, d);
  } else {
    const SketchMatrix haar = draw_sketch(Ensemble::haar(), r, d, seed);
    a_ = std::sqrt(static_cast<double>(r) / static_cast<double>(d)) * haar.entries();
  }
}

std::string LowRankProblem::name() const {
  return "l-" + base_->name() + "-r" + std::to_string(base_->dim()) + "-" + to_string(rotation_);
}

VectorXd LowRankProblem::reduce(const VectorXd& x) const {
  if (x.size() != dim_) {
    throw DimensionError(name() + ": expected dimension " + std::to_string(dim_) + ", got " +
                         std::to_string(x.size()));
  }
  if (rotation_ == Rotation::AxisAligned) return x.head(base_->dim());
  return a_ * x;
}

VectorXd LowRankProblem::expand(const VectorXd& y) const {
  if (rotation_ == Rotation::AxisAligned) {
    VectorXd x = VectorXd::Zero(dim_);
    x.head(y.size()) = y;
    return x;
  }
  return a_.transpose() * y;
}

double LowRankProblem::value(const VectorXd& x) const { return base_->value(reduce(x)); }

VectorXd LowRankProblem::gradient(const VectorXd& x) const {
  return expand(base_->gradient(reduce(x)));
}

VectorXd LowRankProblem::hvp(const VectorXd& x, const VectorXd& v) const {
  return expand(base_->hvp(reduce(x), reduce(v)));
}

VectorXd LowRankProblem::initial_point() const { return expand(base_->initial_point()); }

ProblemPtr make_low_rank(ProblemPtr base, Index d, Rotation rotation, std::uint64_t seed) {
  return std::make_shared<LowRankProblem>(std::move(base), d, rotation, seed);
}

}  // namespace rarc
