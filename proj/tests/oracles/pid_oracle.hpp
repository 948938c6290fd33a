#pragma once

// Brute-force Imin decomposition written straight from the definitions with
// explicit loops. Shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Pid {
  double total = 0, rdn = 0, unq1 = 0, unq2 = 0, syn = 0, mi1 = 0, mi2 = 0;
};

struct SpecificPid {
  double px = 0, total = 0, rdn = 0, unq1 = 0, unq2 = 0, syn = 0;
};

// p[x][a][b] with dimensions nx, na, nb, row-major.
class Cube {
 public:
  Cube(std::size_t nx, std::size_t na, std::size_t nb, std::vector<double> p)
      : nx_(nx), na_(na), nb_(nb), p_(std::move(p)) {}

  double p(std::size_t x, std::size_t a, std::size_t b) const {
    return p_[(x * na_ + a) * nb_ + b];
  }

  double px(std::size_t x) const {
    double s = 0;
    for (std::size_t a = 0; a < na_; ++a)
      for (std::size_t b = 0; b < nb_; ++b) s += p(x, a, b);
    return s;
  }
  double pa(std::size_t a) const {
    double s = 0;
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t b = 0; b < nb_; ++b) s += p(x, a, b);
    return s;
  }
  double pb(std::size_t b) const {
    double s = 0;
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t a = 0; a < na_; ++a) s += p(x, a, b);
    return s;
  }
  double pxa(std::size_t x, std::size_t a) const {
    double s = 0;
    for (std::size_t b = 0; b < nb_; ++b) s += p(x, a, b);
    return s;
  }
  double pxb(std::size_t x, std::size_t b) const {
    double s = 0;
    for (std::size_t a = 0; a < na_; ++a) s += p(x, a, b);
    return s;
  }
  double pab(std::size_t a, std::size_t b) const {
    double s = 0;
    for (std::size_t x = 0; x < nx_; ++x) s += p(x, a, b);
    return s;
  }

  // I(X=x; Y1) = sum_a p(a|x) [log 1/p(x) - log 1/p(x|a)]
  double spec1(std::size_t x) const {
    double s = 0;
    for (std::size_t a = 0; a < na_; ++a) {
      const double joint = pxa(x, a);
      if (joint <= 0) continue;
      const double p_a_given_x = joint / px(x);
      const double p_x_given_a = joint / pa(a);
      s += p_a_given_x * (std::log2(1.0 / px(x)) - std::log2(1.0 / p_x_given_a));
    }
    return s;
  }
  double spec2(std::size_t x) const {
    double s = 0;
    for (std::size_t b = 0; b < nb_; ++b) {
      const double joint = pxb(x, b);
      if (joint <= 0) continue;
      s += (joint / px(x)) * (std::log2(1.0 / px(x)) - std::log2(pb(b) / joint));
    }
    return s;
  }
  double spec12(std::size_t x) const {
    double s = 0;
    for (std::size_t a = 0; a < na_; ++a)
      for (std::size_t b = 0; b < nb_; ++b) {
        const double joint = p(x, a, b);
        if (joint <= 0) continue;
        s += (joint / px(x)) * (std::log2(1.0 / px(x)) - std::log2(pab(a, b) / joint));
      }
    return s;
  }

  SpecificPid specific(std::size_t x) const {
    SpecificPid r;
    r.px = px(x);
    const double i1 = spec1(x), i2 = spec2(x);
    r.total = spec12(x);
    r.rdn = std::min(i1, i2);
    r.unq1 = i1 - r.rdn;
    r.unq2 = i2 - r.rdn;
    r.syn = r.total - r.unq1 - r.unq2 - r.rdn;
    return r;
  }

  Pid decompose() const {
    Pid r;
    // Mutual informations from the joint-over-product definition.
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t a = 0; a < na_; ++a)
        for (std::size_t b = 0; b < nb_; ++b) {
          const double v = p(x, a, b);
          if (v > 0) r.total += v * std::log2(v / (px(x) * pab(a, b)));
        }
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t a = 0; a < na_; ++a) {
        const double v = pxa(x, a);
        if (v > 0) r.mi1 += v * std::log2(v / (px(x) * pa(a)));
      }
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t b = 0; b < nb_; ++b) {
        const double v = pxb(x, b);
        if (v > 0) r.mi2 += v * std::log2(v / (px(x) * pb(b)));
      }
    for (std::size_t x = 0; x < nx_; ++x) {
      if (px(x) > 0) r.rdn += px(x) * std::min(spec1(x), spec2(x));
    }
    r.unq1 = r.mi1 - r.rdn;
    r.unq2 = r.mi2 - r.rdn;
    r.syn = r.total - r.unq1 - r.unq2 - r.rdn;
    return r;
  }

 private:
  std::size_t nx_, na_, nb_;
  std::vector<double> p_;
};

}  // namespace oracle
