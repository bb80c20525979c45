#pragma once

#include <span>
#include <vector>

#include "infradius/density.hpp"
#include "infradius/expfam.hpp"
#include "infradius/means.hpp"

namespace infradius {

// All values are in nats; +inf is a first-class result (support mismatches),
// never an error. Conversion to bits happens only at output time.

struct DivergenceSpec {
  enum class Kind {
    KLD,
    ReverseKLD,
    RenyiAlpha,
    RenyiInfinity,
    TotalVariation,
    BhattacharyyaCoefficient,
    SkewJSD,
    GeneralizedBhattacharyya,
  };

  Kind kind = Kind::KLD;
  double alpha = 0.5;
  double beta = 0.5;
  MeanSpec mean;  // GeneralizedBhattacharyya only

  static DivergenceSpec kld();
  static DivergenceSpec reverse_kld();
  static DivergenceSpec renyi(double alpha);
  static DivergenceSpec renyi_infinity();
  static DivergenceSpec total_variation();
  static DivergenceSpec bhattacharyya(double alpha);
  static DivergenceSpec skew_jsd(double alpha, double beta);
  static DivergenceSpec generalized_bhattacharyya(MeanSpec mean);
};

double evaluate_divergence(const DivergenceSpec& spec, const Density& p,
                           const Density& q);

// Shannon entropy -int p log p (differential entropy may be negative).
double entropy(const Density& p);
// Cross-entropy h[p:q] = -int p log q.
double cross_entropy(const Density& p, const Density& q);
// Rényi entropy of order alpha; alpha=1 dispatches to entropy, alpha=0 is the
// max-entropy log|support| (discrete), alpha=inf the min-entropy -log max p.
double renyi_entropy(const Density& p, double alpha);

double kld(const Density& p, const Density& q);
// Rényi divergence; alpha=1 dispatches to kld, alpha=inf to sup log(p/q).
double renyi_divergence(const Density& p, const Density& q, double alpha);
// int p^alpha q^(1-alpha) for alpha in (0,1); 1/2 gives the ordinary coefficient.
double bhattacharyya_coefficient(const Density& p, const Density& q, double alpha);
double total_variation(const Density& p, const Density& q);

// (1-beta) KL[p : m_alpha] + beta KL[q : m_alpha] with m_alpha = (1-alpha)p + alpha q.
double skew_jsd(const Density& p, const Density& q, double alpha, double beta);

// Jensen-Shannon diversity index sum_i w_i KL[p_i : mixture]. Both the KLD
// route and the entropy route h[mixture] - sum w_i h[p_i] are computed and
// must agree within 1e-8.
double js_diversity(const WeightedSet& set);

// Generator of the skewed JSD as an f-divergence; f(1) = 0, strictly convex.
double f_generator_jsd(double u, double alpha, double beta);
// I_f[p:q] = int p f(q/p) with the standard boundary conventions.
double f_divergence_jsd(const Density& p, const Density& q, double alpha, double beta);

// N_beta( D[p : (pq)^M_alpha], D[q : (pq)^M_alpha] ) where (pq)^M_alpha is the
// normalized pointwise M-mixture. Two-point skew weights live in the specs.
double mn_jsd(const Density& p, const Density& q, const MeanSpec& mixing_mean,
              const MeanSpec& averaging_mean, const DivergenceSpec& base);

// (F(t1)+F(t2))/2 - F((t1+t2)/2); equals the averaged Jensen-Bregman form.
double jensen_bregman(const ConvexFunction& F, std::span<const double> theta1,
                      std::span<const double> theta2);

}  // namespace infradius
