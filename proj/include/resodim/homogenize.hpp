#pragma once

#include <optional>
#include <vector>

#include "resodim/ifs.hpp"
#include "resodim/ifs2d.hpp"

namespace resodim {

struct HomogenizeReport {
  long long k = 0;
  std::vector<long long> v;  // v_i = ceil(k * r_i^gamma)
  BigInt N;                  // multinomial path count
  Scalar rho;                // common ratio of the subsystem
  double tau = 0;            // log N / log(1/rho)
  double gamma = 0;          // similarity dimension of the input
};

struct PruneResult {
  IFS1D system;
  double dim_before = 0;
  double dim_after = 0;
};

/// Lexicographic generator of the words containing exactly v_i copies of
/// letter i; next() yields words until exhausted.
class MultisetWords {
 public:
  explicit MultisetWords(const std::vector<long long>& v);
  bool next(Word& out);

 private:
  std::vector<int> current_;
  bool first_ = true;
  bool done_ = false;
};

struct HomogeneousResult {
  std::optional<IFS1D> system;  // absent when N exceeds the word budget
  HomogenizeReport report;
};

struct ReflectionResult {
  IFS2D system;
  double dim_before = 0;
  double dim_after = 0;
};

struct RepairResult {
  IFS1D a, b;
  bool certified = false;  // log-ratio irrational up to q_max
  bool prefixed_a = false;
  bool prefixed_b = false;
};

/// Maximal greedy subcollection of scale-delta cylinders with pairwise
/// disjoint hull images, returned as a word-composed subsystem.
PruneResult prune_to_disjoint(const IFS1D& ifs, const Scalar& delta);

/// Single-ratio subsystem of all k-step words with letter counts v; the
/// report is always exact, the system is materialized only when N fits the
/// enumeration budget.
HomogeneousResult homogeneous_subsystem(const IFS1D& ifs, long long k,
                                        std::size_t max_enumerate = 100'000);

/// Prefixes maps of the homogenized systems with the first original map
/// until the pair of common ratios has no rational log-ratio witness.
RepairResult repair_irrationality(const IFS1D& ifs_a, const IFS1D& ifs_b,
                                  const IFS1D& hom_a, const IFS1D& hom_b,
                                  long long q_max = 1'000'000,
                                  double tol = 1e-12);

/// Depth-iterated system with every reflecting word composed with a
/// reflecting generator, leaving all maps orientation-preserving.
ReflectionResult remove_reflections(const IFS2D& ifs, int depth);

}  // namespace resodim
