#pragma once

#include <string>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

enum class ProbeKind { hilbert_frac, frac_com, triple, projector, hilbert_local };

struct ProbeParams {
  double beta = 0.5;
  double gamma = 0.25;
  int l = 0;
  int m = 1;
  int p = 2;
  /// Cutoff radius of P^phi for the projector probe.
  double cutoff = 1.0;
};

ProbeKind parse_probe_kind(const std::string& s);
std::string to_string(ProbeKind k);

/// Throws ConfigError naming the violated hypothesis.
void validate_probe(ProbeKind kind, const ProbeParams& p);

/// Commutator norm over the right-hand side of the corresponding inequality (p = 2).
/// A vanishing commutator gives 0; a vanishing right-hand side otherwise is DegenerateInput.
double commutator_probe(ProbeKind kind, const Field& g, const Field& f, const ProbeParams& params);

struct ProbeEnsemble {
  ProbeKind kind;
  int pairs = 0;
  int n = 0;
  double length = 0.0;
  double max_ratio = 0.0;
  double max_ratio_doubled = 0.0;
  double median = 0.0;
  double median_doubled = 0.0;
  bool finite = false;
  /// max ratio changes by less than 2x under doubling n
  bool stable = false;
  /// max ratio stays within 10x of the median at both resolutions
  bool within_median = false;
};

/// Seeded random_band pairs (k in [0.5, 4]) at n and 2n on the same box.
ProbeEnsemble probe_ensemble(ProbeKind kind, const ProbeParams& params, int pairs = 50, int n = 1024,
                             double length = 64.0, unsigned long seed = 1);

}  // namespace fkdv
