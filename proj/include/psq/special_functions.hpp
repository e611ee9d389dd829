#ifndef PSQ_SPECIAL_FUNCTIONS_HPP
#define PSQ_SPECIAL_FUNCTIONS_HPP

namespace psq {

// Gamma function for x > 0 (DomainError otherwise).
double gamma_fn(double x);

// Airy function of the first kind and its derivative at a real argument.
struct AiryValue {
    double argument;
    double ai;
    double ai_prime;
};

// Ai and Ai' for |x| <= 20 (DomainError outside), good to >= 10 significant
// digits.  Uses the Maclaurin series pair with error-compensated summation
// for |x| <= 9 and the standard asymptotic expansions beyond.
AiryValue airy(double x);

// Largest (rightmost) real zero of Ai, approx -2.33811.
double airy_max_root();

// Largest real zero of Ai', approx -1.01879.
double airy_prime_max_root();

// Largest real r solving Ai'(r + eta^2/4) / Ai(r + eta^2/4) = -eta/2,
// for |eta| <= 50.  This is the coefficient entering the critical-regime
// relaxation-rate expansion; at eta = 0 it reduces to the largest Ai' zero.
double solve_r1(double eta);

} // namespace psq

#endif // PSQ_SPECIAL_FUNCTIONS_HPP
