#include "kscars/basis.hpp"

#include <algorithm>

#include "kscars/error.hpp"

namespace kscars {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Size: return "size";
    case ErrorKind::InvalidState: return "invalid_state";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

std::string_view to_string(Constraint c) noexcept {
  return c == Constraint::Full ? "full" : "pxp";
}

Constraint parse_constraint(std::string_view text) {
  if (text == "full") return Constraint::Full;
  if (text == "pxp" || text == "constrained") return Constraint::NoAdjacentExcitationsPeriodic;
  fail(ErrorKind::Configuration, "unknown constraint '" + std::string(text) + "'");
}

namespace {

Mask low_bits(int n) {
  return n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

Mask rotate_right(Mask mask, int n) {
  return (mask >> 1) | ((mask & 1u) << (n - 1));
}

// Depth-first from the most significant site, 0-branch before 1-branch, so
// the output is already ascending.
void enumerate_blockade(int n, int bit, Mask prefix, bool prev_set, std::vector<Mask>& out) {
  if (bit < 0) {
    // wrap-around pair (site N, site 1)
    const bool top = (prefix >> (n - 1)) & 1u;
    if (!(top && (prefix & 1u))) out.push_back(prefix);
    return;
  }
  enumerate_blockade(n, bit - 1, prefix, false, out);
  if (!prev_set) enumerate_blockade(n, bit - 1, prefix | (Mask{1} << bit), true, out);
}

}  // namespace

bool is_blockade_allowed(Mask mask, int n_sites) noexcept {
  if ((mask & ~low_bits(n_sites)) != 0) return false;
  return (mask & rotate_right(mask, n_sites)) == 0;
}

std::uint64_t lucas_dimension(int n_sites) {
  // F(N+1) + F(N-1) with F(1) = F(2) = 1
  std::vector<std::uint64_t> fib(static_cast<std::size_t>(n_sites) + 2, 0);
  fib[1] = 1;
  for (std::size_t k = 2; k < fib.size(); ++k) fib[k] = fib[k - 1] + fib[k - 2];
  return fib[static_cast<std::size_t>(n_sites) + 1] + fib[static_cast<std::size_t>(n_sites) - 1];
}

ConstrainedBasis::ConstrainedBasis(int n_sites, Constraint constraint)
    : n_sites_(n_sites), constraint_(constraint) {
  require(n_sites >= kMinSites && n_sites <= kMaxSites, ErrorKind::Size,
          "n_sites must lie in [2, 32], got " + std::to_string(n_sites));
  if (constraint == Constraint::Full) {
    require(n_sites <= kMaxFullSites, ErrorKind::Size,
            "full basis limited to N <= " + std::to_string(kMaxFullSites));
    states_.resize(std::size_t{1} << n_sites);
    for (std::size_t k = 0; k < states_.size(); ++k) states_[k] = static_cast<Mask>(k);
  } else {
    states_.reserve(lucas_dimension(n_sites));
    enumerate_blockade(n_sites, n_sites - 1, 0, false, states_);
  }
}

std::optional<std::size_t> ConstrainedBasis::index_of(Mask mask) const noexcept {
  if ((mask & ~low_bits(n_sites_)) != 0) return std::nullopt;
  if (constraint_ == Constraint::Full) return static_cast<std::size_t>(mask);
  const auto it = std::lower_bound(states_.begin(), states_.end(), mask);
  if (it == states_.end() || *it != mask) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

bool ConstrainedBasis::allows(Mask mask) const noexcept {
  if (constraint_ == Constraint::Full) return (mask & ~low_bits(n_sites_)) == 0;
  return is_blockade_allowed(mask, n_sites_);
}

std::string ConstrainedBasis::to_bitstring(Mask mask) const {
  std::string s(static_cast<std::size_t>(n_sites_), '0');
  for (int m = 0; m < n_sites_; ++m)
    if ((mask >> m) & 1u) s[static_cast<std::size_t>(m)] = '1';
  return s;
}

BasisPtr build_basis(int n_sites, Constraint constraint) {
  return std::make_shared<const ConstrainedBasis>(n_sites, constraint);
}

void StateVector::normalize() {
  const double n = amplitudes.norm();
  require(n > 0.0, ErrorKind::Precondition, "cannot normalize a zero vector");
  amplitudes /= n;
}

std::optional<ProductPattern> parse_pattern(std::string_view name) noexcept {
  if (name == "Z2" || name == "z2") return ProductPattern::Z2;
  if (name == "Z2Prime" || name == "Z2'" || name == "z2prime") return ProductPattern::Z2Prime;
  if (name == "Z3" || name == "z3") return ProductPattern::Z3;
  if (name == "Z4" || name == "z4") return ProductPattern::Z4;
  return std::nullopt;
}

Mask pattern_mask(const ConstrainedBasis& basis, std::string_view pattern) {
  const int n = basis.n_sites();
  Mask mask = 0;
  if (const auto named = parse_pattern(pattern)) {
    int period = 2, offset = 0;
    switch (*named) {
      case ProductPattern::Z2: period = 2; break;
      case ProductPattern::Z2Prime: period = 2; offset = 1; break;
      case ProductPattern::Z3: period = 3; break;
      case ProductPattern::Z4: period = 4; break;
    }
    for (int m = offset; m < n; m += period) mask |= Mask{1} << m;
  } else {
    require(static_cast<int>(pattern.size()) == n, ErrorKind::InvalidState,
            "bitstring '" + std::string(pattern) + "' has length " +
                std::to_string(pattern.size()) + ", expected " + std::to_string(n));
    for (int m = 0; m < n; ++m) {
      const char c = pattern[static_cast<std::size_t>(m)];
      require(c == '0' || c == '1', ErrorKind::InvalidState,
              "bitstring may only contain 0 and 1: '" + std::string(pattern) + "'");
      if (c == '1') mask |= Mask{1} << m;
    }
  }
  require(basis.allows(mask), ErrorKind::InvalidState,
          "pattern " + basis.to_bitstring(mask) + " violates the basis constraint");
  return mask;
}

StateVector product_state(BasisPtr basis, Mask mask) {
  require(basis != nullptr, ErrorKind::Configuration, "null basis");
  const auto idx = basis->index_of(mask);
  require(idx.has_value(), ErrorKind::InvalidState,
          "mask " + basis->to_bitstring(mask) + " is not in the basis");
  StateVector v{basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()))};
  v.amplitudes(static_cast<Eigen::Index>(*idx)) = 1.0;
  return v;
}

StateVector product_state(BasisPtr basis, std::string_view pattern) {
  require(basis != nullptr, ErrorKind::Configuration, "null basis");
  return product_state(basis, pattern_mask(*basis, pattern));
}

}  // namespace kscars
