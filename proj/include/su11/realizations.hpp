#pragma once

// Bosonic realizations of the discrete series:
//   HP(k):              J+ = a+ sqrt(2k+N),        sector = all of Fock space,     k
//   amplitude-squared:  J+ = a+^2 / 2,             sector S_j = {|2n+j>},          k = j/2 + 1/4
//   two-mode:           J+ = a+ b+,                F_p^+ = {|n,n+p>}, F_p^- = {|n+p,n>}, k = (p+1)/2
//   four-mode:          J+ = a+ b+ + c+ d+,        ladder over a CG lowest-weight vector, k = (P+1)/2
// Multimode states are sparse maps from occupation tuples to amplitudes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/error.hpp"
#include "su11/squeezed.hpp"

namespace su11::optics {

using Label = std::vector<int>;

/// Sparse vector over multimode Fock labels.
class FockState {
 public:
  FockState() = default;
  explicit FockState(std::size_t modes) : modes_(modes) {}

  static FockState single(Label label, complex amp = 1.0) {
    FockState s(label.size());
    s.add(std::move(label), amp);
    return s;
  }

  std::size_t modes() const { return modes_; }
  const std::map<Label, complex>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const Label& label, complex amp) {
    detail::require(label.size() == modes_, "FockState: label arity mismatch");
    if (amp == complex{}) return;
    auto [it, inserted] = terms_.emplace(label, amp);
    if (!inserted) {
      it->second += amp;
      if (it->second == complex{}) terms_.erase(it);
    }
  }

  complex amplitude(const Label& label) const {
    const auto it = terms_.find(label);
    return it == terms_.end() ? complex{} : it->second;
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& [l, a] : terms_) s += std::norm(a);
    return s;
  }

  FockState scaled(complex f) const {
    FockState out(modes_);
    for (const auto& [l, a] : terms_) out.add(l, a * f);
    return out;
  }

  friend FockState operator+(const FockState& x, const FockState& y) {
    detail::require(x.modes_ == y.modes_, "FockState: mode count mismatch");
    FockState out = x;
    for (const auto& [l, a] : y.terms_) out.add(l, a);
    return out;
  }

  friend FockState operator-(const FockState& x, const FockState& y) { return x + y.scaled(-1.0); }

 private:
  std::size_t modes_ = 0;
  std::map<Label, complex> terms_;
};

inline complex inner_product(const FockState& x, const FockState& y) {
  complex s{};
  for (const auto& [l, a] : x.terms()) s += std::conj(a) * y.amplitude(l);
  return s;
}

inline FockState create(const FockState& s, std::size_t mode) {
  FockState out(s.modes());
  for (const auto& [label, a] : s.terms()) {
    Label l = label;
    const double f = std::sqrt(static_cast<double>(l[mode]) + 1.0);
    ++l[mode];
    out.add(l, a * f);
  }
  return out;
}

inline FockState annihilate(const FockState& s, std::size_t mode) {
  FockState out(s.modes());
  for (const auto& [label, a] : s.terms()) {
    if (label[mode] == 0) continue;
    Label l = label;
    const double f = std::sqrt(static_cast<double>(l[mode]));
    --l[mode];
    out.add(l, a * f);
  }
  return out;
}

/// Multiplies each term by g(label).
template <class G>
FockState diagonal(const FockState& s, G&& g) {
  FockState out(s.modes());
  for (const auto& [l, a] : s.terms()) out.add(l, a * g(l));
  return out;
}

// ---------------------------------------------------------------------------

struct HP {
  double k;
};
struct AmplitudeSquared {
  int j;
};
struct TwoMode {
  int p;
  int sign;  // +1: |n, n+p>, -1: |n+p, n>
};
/// R^-_{p1} x R^-_{p2} restricted to the irreducible component generated from the
/// vacuum |0, n, p1, p2>; P = p1 + p2 + 1 + 2n.
struct FourMode {
  int p1;
  int p2;
  int n;
};

class Realization {
 public:
  using Kind = std::variant<HP, AmplitudeSquared, TwoMode, FourMode>;

  explicit Realization(Kind kind) : kind_(kind) {
    std::visit(
        [](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>) detail::require(r.k > 0.0, "HP realization: k must be > 0");
          if constexpr (std::is_same_v<T, AmplitudeSquared>)
            detail::require(r.j == 0 || r.j == 1, "amplitude-squared realization: j must be 0 or 1");
          if constexpr (std::is_same_v<T, TwoMode>)
            detail::require(r.p >= 0 && (r.sign == 1 || r.sign == -1), "two-mode realization: p >= 0, sign = +-1");
          if constexpr (std::is_same_v<T, FourMode>)
            detail::require(r.p1 >= 0 && r.p2 >= 0 && r.n >= 0, "four-mode realization: p1, p2, n must be >= 0");
        },
        kind_);
  }

  const Kind& kind() const { return kind_; }

  std::size_t modes() const {
    return std::visit(
        [](const auto& r) -> std::size_t {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP> || std::is_same_v<T, AmplitudeSquared>) return 1;
          if constexpr (std::is_same_v<T, TwoMode>) return 2;
          return 4;
        },
        kind_);
  }

  /// Level P of the four-mode component (0 for other kinds).
  int level() const {
    if (const auto* f = std::get_if<FourMode>(&kind_)) return f->p1 + f->p2 + 1 + 2 * f->n;
    return 0;
  }

  double effective_k() const {
    return std::visit(
        [this](const auto& r) -> double {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>) return r.k;
          if constexpr (std::is_same_v<T, AmplitudeSquared>) return 0.5 * r.j + 0.25;
          if constexpr (std::is_same_v<T, TwoMode>) return 0.5 * (r.p + 1);
          return 0.5 * (level() + 1);
        },
        kind_);
  }

  std::string name() const {
    return std::visit(
        [](const auto& r) -> std::string {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>) return "hp";
          if constexpr (std::is_same_v<T, AmplitudeSquared>) return "amp2";
          if constexpr (std::is_same_v<T, TwoMode>) return "two-mode";
          return "four-mode";
        },
        kind_);
  }

  // Concrete generators on the multimode Fock space.

  FockState jplus(const FockState& s) const {
    return std::visit(
        [&](const auto& r) -> FockState {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>)
            return create(diagonal(s, [&](const Label& l) { return std::sqrt(2.0 * r.k + l[0]); }), 0);
          if constexpr (std::is_same_v<T, AmplitudeSquared>) return create(create(s, 0), 0).scaled(0.5);
          if constexpr (std::is_same_v<T, TwoMode>) return create(create(s, 0), 1);
          return create(create(s, 0), 1) + create(create(s, 2), 3);
        },
        kind_);
  }

  FockState jminus(const FockState& s) const {
    return std::visit(
        [&](const auto& r) -> FockState {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>)
            return diagonal(annihilate(s, 0), [&](const Label& l) { return std::sqrt(2.0 * r.k + l[0]); });
          if constexpr (std::is_same_v<T, AmplitudeSquared>) return annihilate(annihilate(s, 0), 0).scaled(0.5);
          if constexpr (std::is_same_v<T, TwoMode>) return annihilate(annihilate(s, 0), 1);
          return annihilate(annihilate(s, 0), 1) + annihilate(annihilate(s, 2), 3);
        },
        kind_);
  }

  FockState j0(const FockState& s) const {
    return std::visit(
        [&](const auto& r) -> FockState {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>)
            return diagonal(s, [&](const Label& l) { return r.k + l[0]; });
          if constexpr (std::is_same_v<T, AmplitudeSquared>)
            return diagonal(s, [](const Label& l) { return 0.5 * (l[0] + 0.5); });
          if constexpr (std::is_same_v<T, TwoMode>)
            return diagonal(s, [](const Label& l) { return 0.5 * (l[0] + l[1] + 1); });
          return diagonal(s, [](const Label& l) { return 0.5 * (l[0] + l[1] + l[2] + l[3] + 2); });
        },
        kind_);
  }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------

inline double binomial(int n, int m) {
  if (m < 0 || m > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0));
}

/// Lowest-weight vector of R^-_P inside R^-_{p1} x R^-_{p2}:
///   binom(2n+p1+p2, n+p1)^{-1/2} sum_{n1} (-1)^{n1} [binom(n,n1) binom(n+p1+p2, n1+p1)]^{1/2}
///     |n1+p1, n1> x |n-n1+p2, n-n1>.
inline FockState cg_vacuum(int p1, int p2, int n) {
  detail::require(p1 >= 0 && p2 >= 0 && n >= 0, "cg_vacuum: p1, p2, n must be >= 0");
  FockState s(4);
  const double pref = 1.0 / std::sqrt(binomial(2 * n + p1 + p2, n + p1));
  for (int n1 = 0; n1 <= n; ++n1) {
    const double c = std::sqrt(binomial(n, n1) * binomial(n + p1 + p2, n1 + p1));
    s.add({n1 + p1, n1, n - n1 + p2, n - n1}, pref * (n1 % 2 == 0 ? c : -c));
  }
  return s;
}

/// Concrete image of the abstract basis vector |k,n>.
class ModeBasisMap {
 public:
  explicit ModeBasisMap(Realization real) : real_(std::move(real)) {}

  const Realization& realization() const { return real_; }

  FockState vacuum() const {
    return std::visit(
        [](const auto& r) -> FockState {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>)
            return FockState::single({0});
          else if constexpr (std::is_same_v<T, AmplitudeSquared>)
            return FockState::single({r.j});
          else if constexpr (std::is_same_v<T, TwoMode>)
            return FockState::single(r.sign > 0 ? Label{0, r.p} : Label{r.p, 0});
          else
            return cg_vacuum(r.p1, r.p2, r.n);
        },
        real_.kind());
  }

  /// The single label of |k,n> for the one-label kinds; throws for the four-mode ladder.
  Label label(std::size_t n) const {
    const int m = static_cast<int>(n);
    return std::visit(
        [m](const auto& r) -> Label {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, HP>) return {m};
          if constexpr (std::is_same_v<T, AmplitudeSquared>) return {2 * m + r.j};
          if constexpr (std::is_same_v<T, TwoMode>) return r.sign > 0 ? Label{m, m + r.p} : Label{m + r.p, m};
          throw DomainError("ModeBasisMap::label: four-mode basis states are superpositions");
        },
        real_.kind());
  }

  /// Basis images |0>, ..., |nmax>. Four-mode: (J+)^n |vac> / sqrt(n! [[2k+n-1]]!).
  std::vector<FockState> basis(std::size_t nmax) const {
    std::vector<FockState> out;
    out.reserve(nmax + 1);
    if (!std::holds_alternative<FourMode>(real_.kind())) {
      for (std::size_t n = 0; n <= nmax; ++n) out.push_back(FockState::single(label(n)));
      return out;
    }
    const double k = real_.effective_k();
    out.push_back(vacuum());
    for (std::size_t n = 0; n < nmax; ++n) out.push_back(real_.jplus(out.back()).scaled(1.0 / raising_element(k, n)));
    return out;
  }

 private:
  Realization real_;
};

inline FockState embed_state(const StateVector& abstract, const Realization& real) {
  detail::require(std::abs(abstract.rep().k() - real.effective_k()) <= 1e-12,
                  "embed_state: k of the state does not match the realization");
  const auto basis = ModeBasisMap(real).basis(abstract.dim() - 1);
  FockState out(real.modes());
  for (std::size_t n = 0; n < abstract.dim(); ++n)
    if (abstract[n] != complex{}) out = out + basis[n].scaled(abstract[n]);
  return out;
}

struct MatrixElementResidual {
  double jplus;
  double jminus;
  double j0;
  double max() const { return std::max({jplus, jminus, j0}); }
};

/// Concrete <n+1|J+|n>, <n-1|J-|n>, <n|J0|n> against sqrt((n+1)(2k+n)), sqrt(n(2k+n-1)), n+k,
/// each residual also including any leakage out of the ladder.
inline MatrixElementResidual matrix_element_check(const Realization& real, std::size_t n) {
  const auto basis = ModeBasisMap(real).basis(n + 1);
  const double k = real.effective_k();
  const FockState& v = basis[n];
  auto resid = [](const FockState& got, const FockState& want) { return std::sqrt((got - want).norm2()); };
  MatrixElementResidual r{};
  r.jplus = resid(real.jplus(v), basis[n + 1].scaled(raising_element(k, n)));
  r.jminus = n == 0 ? std::sqrt(real.jminus(v).norm2())
                    : resid(real.jminus(v), basis[n - 1].scaled(raising_element(k, n - 1)));
  r.j0 = resid(real.j0(v), v.scaled(static_cast<double>(n) + k));
  return r;
}

/// Perelomov state D(alpha)|k,0> on S_j, k = j/2 + 1/4, as single-mode amplitudes on |2n+j>.
inline FockState squeezed_vacuum_amp2(complex alpha, int j, std::size_t truncation) {
  const Realization real(AmplitudeSquared{j});
  StateOptions opts;
  opts.tail_tol = std::numeric_limits<double>::infinity();
  return embed_state(perelomov_state(alpha, RepLabel(real.effective_k(), truncation), opts), real);
}

/// <2n|S|0> = (e^{i theta} tanh r)^n sqrt((2n)!) / (2^n n! sqrt(cosh r)),
/// S = exp(alpha a+^2/2 - conj(alpha) a^2/2), for n < truncation.
inline FockState squeezed_vacuum_textbook(complex alpha, std::size_t truncation) {
  const double r = std::abs(alpha), t = std::tanh(r);
  const complex unit = r > 0.0 ? alpha / r : complex(1.0);
  FockState s(1);
  complex phase = 1.0;
  for (std::size_t n = 0; n < truncation; ++n) {
    const double nn = static_cast<double>(n);
    const double mag = n == 0 ? 1.0 : std::exp(nn * std::log(t) + 0.5 * std::lgamma(2.0 * nn + 1.0) - nn * std::log(2.0) -
                                          std::lgamma(nn + 1.0));
    if (n > 0 && t == 0.0) break;
    s.add({2 * static_cast<int>(n)}, phase * mag / std::sqrt(std::cosh(r)));
    phase *= unit;
  }
  return s;
}

}  // namespace su11::optics
