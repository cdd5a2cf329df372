#include "qjcm/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qjcm/errors.hpp"

namespace qjcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_finite(double value, const char* name, const char* kind) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << kind << " requires " << name << " > 0 (got " << value << ")";
    throw InvalidSpec(msg.str());
  }
}

// (1 - b^x) / (1 - b), accurate for b close to 1 and equal to x at b = 1.
double q_bracket(double b, double x) {
  if (b == 1.0) return x;
  const double lb = std::log(b);
  return std::expm1(x * lb) / std::expm1(lb);
}

double q_bracket_derivative(double b, double x) {
  if (b == 1.0) return 1.0;
  const double lb = std::log(b);
  return std::exp(x * lb) * lb / std::expm1(lb);
}

// p = 0 degenerates to (1 - 0^x) / 1, which is 1 for any x > 0.
double p_bracket(double p, double x) {
  if (p == 0.0) return x > 0.0 ? 1.0 : 0.0;
  return q_bracket(p, x);
}

double p_bracket_derivative(double p, double x) {
  if (p == 0.0) return 0.0;
  return q_bracket_derivative(p, x);
}

}  // namespace

const char* to_string(DeformationKind kind) noexcept {
  switch (kind) {
    case DeformationKind::Standard: return "standard";
    case DeformationKind::ArikCoon: return "arik_coon";
    case DeformationKind::PensonSolomon: return "penson_solomon";
    case DeformationKind::Quesne: return "quesne";
    case DeformationKind::Kerr: return "kerr";
    case DeformationKind::GeneralQ: return "general_q";
  }
  return "unknown";
}

DeformationSpec DeformationSpec::standard() { return DeformationSpec{}; }

DeformationSpec DeformationSpec::arik_coon(double q) {
  require_positive_finite(q, "q", "arik_coon");
  DeformationSpec s;
  s.kind_ = DeformationKind::ArikCoon;
  s.q_ = q;
  return s;
}

DeformationSpec DeformationSpec::penson_solomon(double q) {
  require_positive_finite(q, "q", "penson_solomon");
  if (q > 1.0) {
    std::ostringstream msg;
    msg << "penson_solomon requires 0 < q <= 1 (got " << q << ")";
    throw InvalidSpec(msg.str());
  }
  DeformationSpec s;
  s.kind_ = DeformationKind::PensonSolomon;
  s.q_ = q;
  return s;
}

DeformationSpec DeformationSpec::quesne(double q) {
  require_positive_finite(q, "q", "quesne");
  DeformationSpec s;
  s.kind_ = DeformationKind::Quesne;
  s.q_ = q;
  return s;
}

DeformationSpec DeformationSpec::kerr(double k) {
  require_positive_finite(k, "k", "kerr");
  DeformationSpec s;
  s.kind_ = DeformationKind::Kerr;
  s.k_ = k;
  return s;
}

DeformationSpec DeformationSpec::general_q(double q, double p, double lambda, double mu) {
  require_positive_finite(q, "q", "general_q");
  for (auto [value, name] : {std::pair{p, "p"}, std::pair{lambda, "lambda"}, std::pair{mu, "mu"}}) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      std::ostringstream msg;
      msg << "general_q requires " << name << " >= 0 (got " << value << ")";
      throw InvalidSpec(msg.str());
    }
  }
  DeformationSpec s;
  s.kind_ = DeformationKind::GeneralQ;
  s.q_ = q;
  s.p_ = p;
  s.lambda_ = lambda;
  s.mu_ = mu;
  return s;
}

bool DeformationSpec::is_standard() const noexcept {
  switch (kind_) {
    case DeformationKind::Standard: return true;
    case DeformationKind::ArikCoon:
    case DeformationKind::PensonSolomon:
    case DeformationKind::Quesne: return q_ == 1.0;
    case DeformationKind::Kerr: return false;
    case DeformationKind::GeneralQ: return p_ == 1.0 && (q_ == 1.0 || (lambda_ == 0.0 && mu_ == 0.0));
  }
  return false;
}

std::string DeformationSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind_);
  switch (kind_) {
    case DeformationKind::Standard: break;
    case DeformationKind::Kerr: out << "(k=" << k_ << ")"; break;
    case DeformationKind::GeneralQ:
      out << "(q=" << q_ << ", p=" << p_ << ", lambda=" << lambda_ << ", mu=" << mu_ << ")";
      break;
    default: out << "(q=" << q_ << ")"; break;
  }
  return out.str();
}

double deformed_number_real(const DeformationSpec& spec, double x) {
  if (x == 0.0) return 0.0;
  const double q = spec.q();
  switch (spec.kind()) {
    case DeformationKind::Standard: return x;
    case DeformationKind::ArikCoon: return q_bracket(q, x);
    case DeformationKind::PensonSolomon: return x * std::pow(q, -2.0 * (x - 1.0));
    case DeformationKind::Quesne:
      // (q^-x - 1) / (1 - q) is the bracket in base 1/q scaled by q^-1.
      if (q == 1.0) return x;
      return std::expm1(-x * std::log(q)) / -std::expm1(std::log(q));
    case DeformationKind::Kerr: return x * (1.0 + spec.k() * (x - 1.0));
    case DeformationKind::GeneralQ:
      return std::pow(q, -(spec.mu() + 2.0 * spec.lambda() * (x - 1.0))) * p_bracket(spec.p(), x);
  }
  return x;
}

double deformed_number_derivative(const DeformationSpec& spec, double x) {
  const double q = spec.q();
  switch (spec.kind()) {
    case DeformationKind::Standard: return 1.0;
    case DeformationKind::ArikCoon: return q_bracket_derivative(q, x);
    case DeformationKind::PensonSolomon:
      return std::pow(q, -2.0 * (x - 1.0)) * (1.0 - 2.0 * x * std::log(q));
    case DeformationKind::Quesne:
      if (q == 1.0) return 1.0;
      return -std::log(q) * std::exp(-x * std::log(q)) / -std::expm1(std::log(q));
    case DeformationKind::Kerr: return 1.0 + spec.k() * (2.0 * x - 1.0);
    case DeformationKind::GeneralQ: {
      const double scale = std::pow(q, -(spec.mu() + 2.0 * spec.lambda() * (x - 1.0)));
      const double bracket = p_bracket(spec.p(), x);
      return scale * (p_bracket_derivative(spec.p(), x) - 2.0 * spec.lambda() * std::log(q) * bracket);
    }
  }
  return 1.0;
}

double deformed_number(const DeformationSpec& spec, std::size_t n) {
  if (n == 0) return 0.0;
  if (spec.kind() == DeformationKind::Standard) return static_cast<double>(n);
  return deformed_number_real(spec, static_cast<double>(n));
}

double f_value(const DeformationSpec& spec, std::size_t n) {
  if (n == 0) return 1.0;
  return std::sqrt(deformed_number(spec, n) / static_cast<double>(n));
}

double log_deformed_factorial(const DeformationSpec& spec, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= n; ++k) acc += std::log(deformed_number(spec, k));
  return acc;
}

double coupled_product(const DeformationSpec& spec, std::size_t n, int m) {
  double prod = 1.0;
  for (int k = 1; k <= m; ++k) prod *= deformed_number(spec, n + static_cast<std::size_t>(k));
  return prod;
}

double coupled_product_real(const DeformationSpec& spec, double x, int m) {
  double prod = 1.0;
  for (int k = 1; k <= m; ++k) prod *= deformed_number_real(spec, x + k);
  return prod;
}

double coupled_product_derivative(const DeformationSpec& spec, double x, int m) {
  double total = 0.0;
  for (int k = 1; k <= m; ++k) {
    double term = deformed_number_derivative(spec, x + k);
    for (int j = 1; j <= m; ++j) {
      if (j != k) term *= deformed_number_real(spec, x + j);
    }
    total += term;
  }
  return total;
}

double convergence_radius(const DeformationSpec& spec) {
  const double q = spec.q();
  switch (spec.kind()) {
    case DeformationKind::Standard:
    case DeformationKind::PensonSolomon:
    case DeformationKind::Kerr: return kInf;
    case DeformationKind::ArikCoon: return q < 1.0 ? 1.0 / (1.0 - q) : kInf;
    case DeformationKind::Quesne: return q > 1.0 ? 1.0 / (q - 1.0) : kInf;
    case DeformationKind::GeneralQ: {
      // {n} ~ c * (q^-2lambda * max(p, 1))^n, times n when p == 1.
      const double p = spec.p();
      const double geometric = std::pow(q, -2.0 * spec.lambda());
      const double rate = geometric * std::max(p, 1.0);
      constexpr double eps = 1e-12;
      if (rate > 1.0 + eps) return kInf;
      if (rate < 1.0 - eps) return 0.0;
      if (p == 1.0) return kInf;
      const double prefactor = std::pow(q, 2.0 * spec.lambda() - spec.mu());
      return prefactor / std::abs(1.0 - p);
    }
  }
  return kInf;
}

DeformedExpSeries deformed_exp_series(const DeformationSpec& spec, double x, double tail_tol) {
  if (!(tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "exp_f argument must be finite and >= 0 (got " << x << ")";
    throw DomainError(msg.str());
  }
  const double radius = convergence_radius(spec);
  if (!(x < radius) && x > 0.0) {
    std::ostringstream msg;
    msg << spec.describe() << " requires |z|^2 < " << radius << " (got " << x << ")";
    throw DomainError(msg.str());
  }

  DeformedExpSeries series;
  series.log_terms.push_back(0.0);
  if (x == 0.0) return series;

  const double log_x = std::log(x);
  // Running sum held as exp(log_max) * scaled.
  double log_max = 0.0;
  double scaled = 1.0;
  double log_term = 0.0;
  double next_number = deformed_number(spec, 1);

  for (std::size_t n = 0;; ++n) {
    const double ratio = x / next_number;
    const double after = deformed_number(spec, n + 2);
    const double relative_term = std::exp(log_term - log_max) / scaled;
    if (ratio < 1.0 && after >= next_number) {
      const double tail = relative_term * ratio / (1.0 - ratio);
      if (relative_term <= tail_tol && tail <= tail_tol) {
        series.log_sum = log_max + std::log(scaled);
        series.tail_bound = tail;
        return series;
      }
    }
    if (series.log_terms.size() >= kMaxSeriesTerms) {
      std::ostringstream msg;
      msg << "exp_f(" << x << ") for " << spec.describe() << " needs more than " << kMaxSeriesTerms
          << " terms";
      throw NonConvergence(msg.str());
    }
    log_term += log_x - std::log(next_number);
    series.log_terms.push_back(log_term);
    if (log_term > log_max) {
      scaled = scaled * std::exp(log_max - log_term) + 1.0;
      log_max = log_term;
    } else {
      scaled += std::exp(log_term - log_max);
    }
    next_number = after;
  }
}

SeriesSum deformed_exp(const DeformationSpec& spec, double x, double tail_tol) {
  const auto series = deformed_exp_series(spec, x, tail_tol);
  return {std::exp(series.log_sum), series.n_max()};
}

}  // namespace qjcm
