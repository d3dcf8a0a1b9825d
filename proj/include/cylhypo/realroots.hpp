#pragma once

#include <vector>

namespace cylhypo {

/// Real polynomial helpers, coefficients in ascending degree.
namespace realpoly {

double eval(const std::vector<double>& c, double x);
std::vector<double> derivative(const std::vector<double>& c);
/// Drops trailing coefficients that are exactly zero.
std::vector<double> trimmed(std::vector<double> c);

/// Sturm sequence p0 = c, p1 = c', p_{i+1} = -rem(p_{i-1}, p_i).
std::vector<std::vector<double>> sturm_sequence(const std::vector<double>& c);

/// Number of distinct real roots in (a, b], from sign variations.
int sturm_count(const std::vector<std::vector<double>>& seq, double a, double b);
int sturm_count(const std::vector<double>& c, double a, double b);

/// Cauchy bound: every root satisfies |x| <= bound.
double root_bound(const std::vector<double>& c);

/// Distinct real roots in ascending order, isolated by Sturm bisection and
/// polished by Newton. Empty for constants (including the zero polynomial).
std::vector<double> real_roots(const std::vector<double>& c);

}  // namespace realpoly
}  // namespace cylhypo
