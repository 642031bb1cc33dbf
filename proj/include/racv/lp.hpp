#ifndef RACV_LP_HPP
#define RACV_LP_HPP

#include <vector>

namespace racv {

// ── Dense simplex solver ─────────────────────────────────────────────────────
// Solves   max c·x   s.t.  A x <= b,  x free.
// Free variables are handled internally via the x = u - v substitution, so the
// caller works directly with signed coordinates. Problem sizes in this project
// are tiny (d <= ~12, a few dozen rows), so a dense tableau is plenty.

enum class LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> point;  // optimizer (valid when status == Optimal)
};

/// Maximize c·x subject to A x <= b over free x.
LpResult lp_maximize(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c);

/// Feasibility of A x <= b (phase-1 only).
bool lp_feasible(const std::vector<std::vector<double>>& a,
                 const std::vector<double>& b);

}  // namespace racv

#endif  // RACV_LP_HPP
