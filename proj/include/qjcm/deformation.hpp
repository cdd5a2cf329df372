#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qjcm {

enum class DeformationKind { Standard, ArikCoon, PensonSolomon, Quesne, Kerr, GeneralQ };

const char* to_string(DeformationKind kind) noexcept;

/// Selects the nonlinearity function f(N) of the deformed oscillator
/// A = a f(N), A+ = f(N) a+ and carries its parameters.
///
/// Instances are only created through the named constructors, which reject
/// parameter combinations outside the variant's domain (q <= 0, a
/// Penson-Solomon q above 1, negative Kerr strength, ...). Parameters that a
/// kind does not use keep their neutral value (q = p = 1, k = lambda = mu = 0)
/// so that defaulted equality compares meaningfully.
class DeformationSpec {
 public:
  static DeformationSpec standard();
  /// {n} = (1 - q^n) / (1 - q)
  static DeformationSpec arik_coon(double q);
  /// f(n) = q^-(n-1), requires 0 < q <= 1
  static DeformationSpec penson_solomon(double q);
  /// {n} = (q^-n - 1) / (1 - q)
  static DeformationSpec quesne(double q);
  /// f(n) = sqrt(1 + k (n - 1))
  static DeformationSpec kerr(double k);
  /// f^2(n) = q^-(mu + 2 lambda (n-1)) (1 - p^n) / (n (1 - p))
  static DeformationSpec general_q(double q, double p, double lambda, double mu);

  DeformationKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  double k() const noexcept { return k_; }
  double p() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }

  bool is_standard() const noexcept;

  std::string describe() const;

  bool operator==(const DeformationSpec&) const = default;

 private:
  DeformationSpec() = default;

  DeformationKind kind_ = DeformationKind::Standard;
  double q_ = 1.0;
  double k_ = 0.0;
  double p_ = 1.0;
  double lambda_ = 0.0;
  double mu_ = 0.0;
};

/// Hard cap on the number of terms any deformed series may use.
inline constexpr std::size_t kMaxSeriesTerms = 4096;

/// f(n); f(0) is 1 by convention.
double f_value(const DeformationSpec& spec, std::size_t n);

/// {n} = n f^2(n), with {0} = 0.
double deformed_number(const DeformationSpec& spec, std::size_t n);

/// Smooth extension of {n} to real x >= 0.
double deformed_number_real(const DeformationSpec& spec, double x);

/// d{x}/dx of the smooth extension.
double deformed_number_derivative(const DeformationSpec& spec, double x);

/// ln({n}!) accumulated in log space.
double log_deformed_factorial(const DeformationSpec& spec, std::size_t n);

/// Product {n+1}{n+2}...{n+m} = {n+m}! / {n}!.
double coupled_product(const DeformationSpec& spec, std::size_t n, int m);

/// Same product on the real extension: {x+1}...{x+m}.
double coupled_product_real(const DeformationSpec& spec, double x, int m);

/// d/dx of coupled_product_real.
double coupled_product_derivative(const DeformationSpec& spec, double x, int m);

/// Limit of {n} as n grows: the radius of convergence of exp_f in x = |z|^2.
/// Infinity when the series converges everywhere.
double convergence_radius(const DeformationSpec& spec);

/// Terms of exp_f(x) = sum x^n / {n}! kept in log space.
struct DeformedExpSeries {
  std::vector<double> log_terms;  // ln(x^n / {n}!) for n = 0..n_max
  double log_sum = 0.0;           // ln of the truncated sum
  double tail_bound = 0.0;        // upper bound on (discarded tail) / (truncated sum)

  std::size_t n_max() const { return log_terms.size() - 1; }
};

/// Sums exp_f(x) until both the last included term and a ratio-test bound on
/// the remaining tail fall below tail_tol relative to the running sum.
/// Throws DomainError outside the convergence domain and NonConvergence when
/// more than kMaxSeriesTerms terms would be needed.
DeformedExpSeries deformed_exp_series(const DeformationSpec& spec, double x, double tail_tol);

struct SeriesSum {
  double value;
  std::size_t n_max;
};

SeriesSum deformed_exp(const DeformationSpec& spec, double x, double tail_tol);

}  // namespace qjcm
