#include "racv/lp.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace racv {
namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Two-phase simplex on the standard form max c·x, Ax <= b, x >= 0
// (KACTL-style tableau with an artificial column for phase 1).
class Simplex {
public:
    Simplex(const std::vector<std::vector<double>>& a,
            const std::vector<double>& b,
            const std::vector<double>& c)
        : m_(static_cast<int>(b.size())),
          n_(static_cast<int>(c.size())),
          basic_(m_),
          nonbasic_(n_ + 1),
          t_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) t_[i][j] = a[i][j];
            basic_[i] = n_ + i;
            t_[i][n_] = -1.0;
            t_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            t_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;
        t_[m_ + 1][n_] = 1.0;
    }

    // Returns objective, -inf if infeasible, +inf if unbounded.
    double solve(std::vector<double>& x) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (t_[i][n_ + 1] < t_[r][n_ + 1]) r = i;
        if (t_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!iterate(2) || t_[m_ + 1][n_ + 1] < -kEps) return -kInf;
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n_; ++j)
                        if (s == -1 || std::pair(t_[i][j], nonbasic_[j]) <
                                           std::pair(t_[i][s], nonbasic_[s]))
                            s = j;
                    pivot(i, s);
                }
            }
        }
        const bool bounded = iterate(1);
        x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basic_[i] < n_) x[basic_[i]] = t_[i][n_ + 1];
        return bounded ? t_[m_][n_ + 1] : kInf;
    }

private:
    void pivot(int r, int s) {
        double* a = t_[r].data();
        const double inv = 1.0 / a[s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i != r && std::abs(t_[i][s]) > kEps) {
                double* bi = t_[i].data();
                const double inv2 = bi[s] * inv;
                for (int j = 0; j < n_ + 2; ++j) bi[j] -= a[j] * inv2;
                bi[s] = a[s] * inv2;
            }
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) t_[r][j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) t_[i][s] *= -inv;
        t_[r][s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    bool iterate(int phase) {
        const int x = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j < n_ + 1; ++j) {
                if (nonbasic_[j] == -phase) continue;
                if (s == -1 || std::pair(t_[x][j], nonbasic_[j]) <
                                   std::pair(t_[x][s], nonbasic_[s]))
                    s = j;
            }
            if (t_[x][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (t_[i][s] <= kEps) continue;
                if (r == -1 ||
                    std::pair(t_[i][n_ + 1] / t_[i][s], basic_[i]) <
                        std::pair(t_[r][n_ + 1] / t_[r][s], basic_[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    int m_, n_;
    std::vector<int> basic_, nonbasic_;
    std::vector<std::vector<double>> t_;
};

}  // namespace

LpResult lp_maximize(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c) {
    // Free x via x = u - v with u, v >= 0.
    const int m = static_cast<int>(b.size());
    const int d = static_cast<int>(c.size());
    std::vector<std::vector<double>> a2(m, std::vector<double>(2 * d, 0.0));
    std::vector<double> c2(2 * d, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) {
            a2[i][j] = a[i][j];
            a2[i][d + j] = -a[i][j];
        }
    for (int j = 0; j < d; ++j) {
        c2[j] = c[j];
        c2[d + j] = -c[j];
    }
    std::vector<double> x2;
    Simplex sx(a2, b, c2);
    const double obj = sx.solve(x2);

    LpResult res;
    if (obj == -kInf) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    res.point.assign(d, 0.0);
    for (int j = 0; j < d; ++j) res.point[j] = x2[j] - x2[d + j];
    if (obj == kInf) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    res.status = LpStatus::Optimal;
    res.objective = obj;
    return res;
}

bool lp_feasible(const std::vector<std::vector<double>>& a,
                 const std::vector<double>& b) {
    const std::vector<double> c(a.empty() ? 0 : a.front().size(), 0.0);
    if (a.empty()) return true;
    return lp_maximize(a, b, c).status != LpStatus::Infeasible;
}

}  // namespace racv
