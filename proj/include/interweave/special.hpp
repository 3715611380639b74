#pragma once

#include <variant>

#include "interweave/rng.hpp"

namespace interweave {

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// ln of the rising factorial (a)_k = a(a+1)...(a+k-1), a > 0.
double log_rising(double a, int k);

double digamma(double x);

// Generalized Laguerre polynomial L_n^{(beta)}(x), three-term recurrence.
double laguerre_polynomial(int n, double beta, double x);

namespace law {
struct Gamma { double shape, scale; };
struct Beta { double a, b; };
struct Poisson { double mean; };
// Mass (1-p)^beta p^n (beta)_n / n!, i.e. Poisson mixed over Gamma(beta, p/(1-p)).
struct NegativeBinomial { double beta, p; };
struct Normal { double mean, variance; };
struct Exponential { double rate; };
}  // namespace law

using StandardLaw = std::variant<law::Gamma, law::Beta, law::Poisson, law::NegativeBinomial,
                                 law::Normal, law::Exponential>;

void validate(const StandardLaw& l);
double sample(const StandardLaw& l, Stream& rng);
double mean(const StandardLaw& l);
double variance(const StandardLaw& l);

}  // namespace interweave
