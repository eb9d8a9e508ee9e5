#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace kscars {

/// Bit mask of a spin configuration. Site m (1-based) lives at bit m-1; a set
/// bit means the site is excited (|1>).
using Mask = std::uint32_t;

inline constexpr int kMinSites = 2;
inline constexpr int kMaxSites = 32;
// 2^N masks are materialized for the unconstrained basis.
inline constexpr int kMaxFullSites = 26;

enum class Constraint {
  Full,                          // all 2^N configurations
  NoAdjacentExcitationsPeriodic  // Rydberg blockade on a ring
};

std::string_view to_string(Constraint c) noexcept;
Constraint parse_constraint(std::string_view text);

/// Immutable, ordered enumeration of the configurations allowed by a
/// constraint on a periodic chain of n_sites sites.
class ConstrainedBasis {
 public:
  ConstrainedBasis(int n_sites, Constraint constraint);

  int n_sites() const noexcept { return n_sites_; }
  Constraint constraint() const noexcept { return constraint_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const Mask> states() const noexcept { return states_; }
  Mask state(std::size_t k) const { return states_.at(k); }

  /// Ordinal of `mask`, or nullopt when the mask is excluded by the
  /// constraint (or does not fit in n_sites bits).
  std::optional<std::size_t> index_of(Mask mask) const noexcept;

  bool allows(Mask mask) const noexcept;

  /// Site 1 first, e.g. "1010" for the Neel state at N=4.
  std::string to_bitstring(Mask mask) const;

  bool same_as(const ConstrainedBasis& other) const noexcept {
    return this == &other ||
           (n_sites_ == other.n_sites_ && constraint_ == other.constraint_);
  }

 private:
  int n_sites_;
  Constraint constraint_;
  std::vector<Mask> states_;
};

using BasisPtr = std::shared_ptr<const ConstrainedBasis>;

BasisPtr build_basis(int n_sites, Constraint constraint);

/// True when no two cyclically adjacent sites of an n-site ring are set.
bool is_blockade_allowed(Mask mask, int n_sites) noexcept;

/// Number of blockade-allowed configurations on a ring: F(N+1) + F(N-1).
std::uint64_t lucas_dimension(int n_sites);

/// Complex amplitudes over a basis.
struct StateVector {
  BasisPtr basis;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
  void normalize();
};

/// Named product states. Z3 and Z4 put one excitation per period-3/period-4
/// cell starting at site 1.
enum class ProductPattern { Z2, Z2Prime, Z3, Z4 };

std::optional<ProductPattern> parse_pattern(std::string_view name) noexcept;

/// Mask of a named pattern or an explicit site-1-first bitstring. Throws
/// InvalidState when the length is wrong or the pattern is not allowed.
Mask pattern_mask(const ConstrainedBasis& basis, std::string_view pattern);

StateVector product_state(BasisPtr basis, std::string_view pattern);
StateVector product_state(BasisPtr basis, Mask mask);

}  // namespace kscars
