#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcml/derham.hpp"
#include "bcml/integer.hpp"

namespace bcml {

/// Exact value of a counting formula together with the hypotheses it was
/// evaluated under.
struct BoundReport {
  std::string formula;
  std::vector<std::pair<std::string, Integer>> inputs;  // in presentation order
  Integer value;
  std::vector<std::pair<std::string, bool>> flags;
  std::vector<std::string> notes;
};

/// p^{2g} 3^g [p(2g-2)+6g] g!
Integer buium_mm_bound(int g, long p);
/// p^{3g+r} 3^g [p(2g-2)+6g] g!
Integer mordell_lang_reduction_bound(int g, long r, long p);
/// Reduction bound + 2r. HypothesisViolated unless r < g and p >= 2g.
Integer mordell_lang_point_bound(int g, long r, long p);
/// #X(k) + 2g - 2
Integer coleman_chabauty_bound(const Integer& residue_points, int g);

BoundReport buium_mm_report(int g, long p);
BoundReport mordell_lang_reduction_report(int g, long r, long p);
BoundReport mordell_lang_point_report(int g, long r, long p);
BoundReport coleman_chabauty_report(const Integer& residue_points, int g);

/// (Q_q/Z_q)^a + sum Z/m_i, where q = divisible_prime.
struct FinAbGroup {
  std::vector<Integer> cyclic_orders;
  long divisible_rank = 0;
  long divisible_prime = 0;

  bool divisible() const { return divisible_rank > 0; }
  /// Order of a finite group; InvalidInput when a divisible summand is present.
  Integer order() const;
  void validate() const;
};

/// All abelian p-groups of order p^k, k <= max_exponent, one per partition.
std::vector<FinAbGroup> abelian_p_groups(long p, int max_exponent);

/// (#(G/pG), #G[p]) from the invariants.
std::pair<Integer, Integer> gamma_quotient_exact(const FinAbGroup& G, long p);
/// The same by listing every element; finite groups only.
std::pair<Integer, Integer> gamma_quotient_enumerate(const FinAbGroup& G, long p, int jobs = 1);

struct GammaModPBound {
  Integer value;  // p^{g+r}
  /// The torsion part is assumed to satisfy #Gamma_tor[p] <= p^g.
  bool torsion_rank_assumed = true;
  std::string assumption;
};

GammaModPBound gamma_mod_p_bound(int g, long r, long p);

struct TorsionCheck {
  Integer kernel_order;  // #G[p]
  bool within_2g = false;  // #G[p] <= p^{2g}, forced by G[p] in J[p]
  bool within_g = false;   // #G[p] <= p^g, the assumed sharper bound
};

/// Guard for a supplied torsion part; InvalidInput with more than 2g
/// invariant factors.
TorsionCheck check_torsion_part(const FinAbGroup& G, long p, int g);

struct StollEntry {
  CurvePointBar point;
  int n = 0;
  std::string where;  // human-readable coordinates
};

struct StollTable {
  std::vector<StollEntry> entries;  // points with n(s) > 0
  long total = 0;
  int dimension = 0;
  long r = 0;  // g - dimension
};

/// n(s) = min over the nonzero elements of the subspace of ord_s, for every
/// geometric point with n(s) > 0. NotIndependent for a dependent basis.
StollTable stoll_vanishing_sum(const HyperellipticCurve& curve,
                               const std::vector<DifferentialModP>& basis);

BoundReport chabauty_disc_assembly(const Integer& red_bound, long stoll_total);

struct DeterminantalCondition {
  Integer codim;   // (ng - d)(m - d)
  bool satisfied;  // mn >= codim
  /// Smallest m > d with mn >= (ng - d)(m - d), if any.
  std::optional<long> min_m;
  /// Largest such m; nullopt when every m > d works.
  std::optional<long> max_m;
};

DeterminantalCondition determinantal_condition(long n, long m, long g, long d);

}  // namespace bcml
