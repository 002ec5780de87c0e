#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

constexpr Complex kI{0.0, 1.0};

bool is_zero(const CoinVector& v) {
  return v[0] == Complex{} && v[1] == Complex{};
}

// Empty state covering [lo, hi).
WalkState zeros(int lo, int hi) {
  return WalkState(lo, std::vector<CoinVector>(static_cast<std::size_t>(hi - lo)));
}

CoinMatrix coin_at(const CoinProfile& profile, int x, int step) {
  const auto angle = profile.angle(x, step);
  if (!angle) throw Error("profile incomplete");
  return coin_matrix(profile.rotation_angle(*angle), profile.axis());
}

template <typename CoinFn>
WalkState map_coins(const WalkState& state, const CoinProfile& profile,
                    int step, CoinFn transform) {
  std::vector<CoinVector> out(state.amps());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // Unpopulated sites need no coin, so sparse tables only cover the light
    // cone.
    if (is_zero(out[i])) continue;
    const int x = state.offset() + static_cast<int>(i);
    out[i] = transform(coin_at(profile, x, step)) * out[i];
  }
  return WalkState(state.offset(), std::move(out));
}

// Moves coin-0 amplitudes by d0 and coin-1 amplitudes by d1 (each in -1..1).
WalkState translate(const WalkState& state, int d0, int d1) {
  const int lo = state.begin_x() + std::min({d0, d1, 0});
  const int hi = state.end_x() + std::max({d0, d1, 0});
  std::vector<CoinVector> out(static_cast<std::size_t>(hi - lo));
  for (int x = state.begin_x(); x < state.end_x(); ++x) {
    const CoinVector& v = state.at(x);
    out[static_cast<std::size_t>(x + d0 - lo)][0] += v[0];
    out[static_cast<std::size_t>(x + d1 - lo)][1] += v[1];
  }
  return WalkState(lo, std::move(out));
}

}  // namespace

CoinMatrix CoinMatrix::adjoint() const {
  CoinMatrix a;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) a.m[r][c] = std::conj(m[c][r]);
  }
  return a;
}

CoinMatrix coin_matrix(double theta, double axis) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  // n.sigma = [[0, e^{-i axis}], [e^{i axis}, 0]]
  CoinMatrix r;
  r.m[0][0] = c;
  r.m[0][1] = kI * s * std::polar(1.0, -axis);
  r.m[1][0] = kI * s * std::polar(1.0, axis);
  r.m[1][1] = c;
  return r;
}

CoinProfile CoinProfile::homogeneous(double theta, AngleConvention conv,
                                     double axis) {
  CoinProfile p;
  p.kind_ = Kind::Homogeneous;
  p.theta_minus_ = theta;
  p.theta_plus_ = theta;
  p.axis_ = axis;
  p.convention_ = conv;
  return p;
}

CoinProfile CoinProfile::two_domain(double theta_minus, double theta_plus,
                                    int boundary, AngleConvention conv,
                                    double axis) {
  CoinProfile p;
  p.kind_ = Kind::TwoDomain;
  p.theta_minus_ = theta_minus;
  p.theta_plus_ = theta_plus;
  p.boundary_ = boundary;
  p.axis_ = axis;
  p.convention_ = conv;
  return p;
}

CoinProfile CoinProfile::per_step_table(Table table, AngleConvention conv,
                                        double axis) {
  CoinProfile p;
  p.kind_ = Kind::PerStepTable;
  p.table_ = std::move(table);
  p.axis_ = axis;
  p.convention_ = conv;
  return p;
}

std::optional<double> CoinProfile::angle(int x, int step) const {
  switch (kind_) {
    case Kind::Homogeneous:
      return theta_plus_;
    case Kind::TwoDomain:
      return x < boundary_ ? theta_minus_ : theta_plus_;
    case Kind::PerStepTable: {
      const auto it = table_.find({step, x});
      if (it == table_.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

WalkState::WalkState(int offset, std::vector<CoinVector> amps)
    : offset_(offset), amps_(std::move(amps)) {}

WalkState WalkState::localized(int x, const CoinVector& coin) {
  return WalkState(x, {coin});
}

CoinVector WalkState::at(int x) const {
  if (x < begin_x() || x >= end_x()) return {};
  return amps_[static_cast<std::size_t>(x - offset_)];
}

double WalkState::norm_squared() const {
  double n = 0.0;
  for (const auto& v : amps_) n += std::norm(v[0]) + std::norm(v[1]);
  return n;
}

WalkState WalkState::normalized() const {
  const double n = norm_squared();
  if (!(n > 0.0)) throw Error("initial state has zero norm");
  WalkState out(*this);
  out *= 1.0 / std::sqrt(n);
  return out;
}

Distribution WalkState::marginal(int step) const {
  std::vector<double> p;
  p.reserve(amps_.size());
  for (const auto& v : amps_) p.push_back(std::norm(v[0]) + std::norm(v[1]));
  return Distribution(offset_, std::move(p), step);
}

WalkState& WalkState::operator*=(Complex s) {
  for (auto& v : amps_) {
    v[0] *= s;
    v[1] *= s;
  }
  return *this;
}

WalkState operator+(const WalkState& a, const WalkState& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  const int lo = std::min(a.begin_x(), b.begin_x());
  const int hi = std::max(a.end_x(), b.end_x());
  WalkState out = zeros(lo, hi);
  for (int x = lo; x < hi; ++x) {
    const CoinVector va = a.at(x);
    const CoinVector vb = b.at(x);
    out.amps_[static_cast<std::size_t>(x - lo)] = {va[0] + vb[0], va[1] + vb[1]};
  }
  return out;
}

Complex inner(const WalkState& a, const WalkState& b) {
  const int lo = std::max(a.begin_x(), b.begin_x());
  const int hi = std::min(a.end_x(), b.end_x());
  Complex s{};
  for (int x = lo; x < hi; ++x) {
    const CoinVector va = a.at(x);
    const CoinVector vb = b.at(x);
    s += std::conj(va[0]) * vb[0] + std::conj(va[1]) * vb[1];
  }
  return s;
}

double max_abs_diff(const WalkState& a, const WalkState& b) {
  const int lo = std::min(a.begin_x(), b.begin_x());
  const int hi = std::max(a.end_x(), b.end_x());
  double d = 0.0;
  for (int x = lo; x < hi; ++x) {
    const CoinVector va = a.at(x);
    const CoinVector vb = b.at(x);
    d = std::max({d, std::abs(va[0] - vb[0]), std::abs(va[1] - vb[1])});
  }
  return d;
}

WalkState apply_coin(const WalkState& state, const CoinProfile& profile,
                     int step) {
  return map_coins(state, profile, step, [](const CoinMatrix& m) { return m; });
}

WalkState apply_shift(const WalkState& state, WalkKind kind) {
  return kind == WalkKind::Unidirectional ? translate(state, 0, 1)
                                          : translate(state, -1, 1);
}

WalkState step(const WalkState& state, const CoinProfile& profile,
               WalkKind kind, int step_index) {
  return apply_shift(apply_coin(state, profile, step_index), kind);
}

WalkState step_adjoint(const WalkState& state, const CoinProfile& profile,
                       WalkKind kind, int step_index) {
  const WalkState unshifted = kind == WalkKind::Unidirectional
                                  ? translate(state, 0, -1)
                                  : translate(state, 1, -1);
  return map_coins(unshifted, profile, step_index,
                   [](const CoinMatrix& m) { return m.adjoint(); });
}

std::vector<WalkState> evolve_states(const WalkState& initial,
                                     const CoinProfile& profile, WalkKind kind,
                                     int t) {
  if (t < 0) throw Error("evolve: negative step count");
  std::vector<WalkState> states;
  states.reserve(static_cast<std::size_t>(t) + 1);
  states.push_back(initial);
  for (int n = 1; n <= t; ++n) {
    states.push_back(step(states.back(), profile, kind, n));
  }
  return states;
}

std::vector<Distribution> evolve(const WalkState& initial,
                                 const CoinProfile& profile, WalkKind kind,
                                 int t) {
  if (t < 0) throw Error("evolve: negative step count");
  std::vector<Distribution> out;
  out.reserve(static_cast<std::size_t>(t) + 1);
  WalkState current = initial;
  out.push_back(current.marginal(0));
  for (int n = 1; n <= t; ++n) {
    current = step(current, profile, kind, n);
    out.push_back(current.marginal(n));
  }
  return out;
}

WalkState initial_state(NamedInitial name) {
  const double r = std::sqrt(2.0) - 1.0;
  const double n = std::sqrt(4.0 - 2.0 * std::sqrt(2.0));
  switch (name) {
    case NamedInitial::PhiCo:
      return WalkState::localized(0, {Complex(1.0 / n), kI * (r / n)});
    case NamedInitial::PhiCe:
      return WalkState::localized(0, {kI * (r / n), Complex(1.0 / n)});
  }
  throw Error("unknown initial state");
}

WalkState initial_state(const WalkState& custom) { return custom.normalized(); }

Distribution convert_uni_to_bi(const Distribution& dist, int t) {
  if (t < 0) throw Error("not a step-t unidirectional distribution");
  for (int x = dist.begin_x(); x < dist.end_x(); ++x) {
    if ((x < 0 || x > t) && dist.at(x) != 0.0) {
      throw Error("not a step-t unidirectional distribution");
    }
  }
  std::vector<double> probs(static_cast<std::size_t>(2 * t + 1), 0.0);
  for (int x = 0; x <= t; ++x) {
    probs[static_cast<std::size_t>(uni_to_bi_position(x, t) + t)] = dist.at(x);
  }
  return Distribution(-t, std::move(probs), dist.step());
}

CoinProfile map_profile_bi_to_uni(const CoinProfile& profile, int t_max) {
  if (profile.kind() == CoinProfile::Kind::PerStepTable) {
    throw Error("map_profile_bi_to_uni: per-step tables cannot be mapped");
  }
  CoinProfile::Table table;
  for (int tau = 1; tau <= t_max; ++tau) {
    for (int x = 0; x < tau; ++x) {
      const int x_bi = 2 * x - tau + kUniToBiOffset;
      table[{tau, x}] = *profile.angle(x_bi, tau);
    }
  }
  return CoinProfile::per_step_table(std::move(table), profile.convention(),
                                     profile.axis());
}

}  // namespace qwalk
