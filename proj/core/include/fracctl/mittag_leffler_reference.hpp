#pragma once

namespace fracctl {

/// Ground-truth E_{alpha,beta}(x) from the power series summed in MPFR
/// arithmetic. The working precision is `digits` plus the decimal digits lost
/// to cancellation (log10 of the largest term) plus a guard band, so the
/// returned double carries `digits` correct decimals.
///
/// Meant for tests and diagnostics; it is slow.
///
/// Throws OracleOutOfRange for |x| > 50, DomainError for digits outside
/// [1, 30] or invalid alpha/beta.
double ml_reference(double alpha, double beta, double x, int digits);

} // namespace fracctl
