#include "cirsolve/assignment.hpp"

#include <cmath>
#include <limits>

namespace cirsolve {

namespace {

constexpr long double kForbidden = 1e12L;
const long double kNearTie = std::ldexp(1.0L, -40);

struct FloatAssignment {
    std::vector<std::size_t> columns;  // per row, index into the column list
    bool feasible = false;
};

// Hungarian algorithm with potentials; rows <= columns.
FloatAssignment hungarian(const std::vector<std::vector<long double>>& cost) {
    const std::size_t n = cost.size();
    FloatAssignment out;
    if (n == 0) {
        out.feasible = true;
        return out;
    }
    const std::size_t m = cost.front().size();
    if (n > m) return out;

    const long double inf = std::numeric_limits<long double>::infinity();
    std::vector<long double> u(n + 1, 0), v(m + 1, 0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<long double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            long double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const long double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    out.columns.assign(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (p[j] != 0) out.columns[p[j] - 1] = j - 1;
    out.feasible = true;
    for (std::size_t r = 0; r < n; ++r)
        if (cost[r][out.columns[r]] >= kForbidden) out.feasible = false;
    return out;
}

class Solver {
public:
    explicit Solver(const std::vector<std::vector<Rational>>& weights) : w_(weights) {
        rows_ = w_.size();
        cols_ = rows_ == 0 ? 0 : w_.front().size();
        cost_.assign(rows_, std::vector<long double>(cols_, kForbidden));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (w_[r][c].sign() > 0) cost_[r][c] = -w_[r][c].log();
    }

    // Best completion of rows [first, rows) over columns not in `used`.
    // Returns the chosen columns for those rows, or nullopt.
    std::optional<std::vector<std::size_t>> complete(std::size_t first, const std::vector<char>& used) const {
        std::vector<std::size_t> free_cols;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!used[c]) free_cols.push_back(c);
        const std::size_t n = rows_ - first;
        if (n > free_cols.size()) return std::nullopt;
        std::vector<std::vector<long double>> sub(n, std::vector<long double>(free_cols.size()));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < free_cols.size(); ++k) sub[r][k] = cost_[first + r][free_cols[k]];
        FloatAssignment fa = hungarian(sub);
        if (!fa.feasible) return std::nullopt;
        std::vector<std::size_t> out(n);
        for (std::size_t r = 0; r < n; ++r) out[r] = free_cols[fa.columns[r]];
        return out;
    }

    Rational product(const std::vector<std::size_t>& cols, std::size_t first = 0) const {
        Rational p(1);
        for (std::size_t k = 0; k < cols.size(); ++k) p *= w_[first + k][cols[k]];
        return p;
    }

    long double log_cost(const std::vector<std::size_t>& cols) const {
        long double s = 0;
        for (std::size_t r = 0; r < cols.size(); ++r) s += cost_[r][cols[r]];
        return s;
    }

    // Exhaustive best completion of rows [prefix.size(), rows) given the prefix;
    // the first maximum in lexicographic order wins.
    std::optional<std::vector<std::size_t>> exhaustive(std::vector<std::size_t> prefix) const {
        std::vector<char> used(cols_, 0);
        Rational partial(1);
        for (std::size_t r = 0; r < prefix.size(); ++r) {
            used[prefix[r]] = 1;
            partial *= w_[r][prefix[r]];
        }
        std::vector<Rational> suffix_max(rows_ + 1, Rational(1));
        for (std::size_t r = rows_; r-- > 0;) {
            Rational best;
            for (const auto& x : w_[r])
                if (x > best) best = x;
            suffix_max[r] = suffix_max[r + 1] * best;
        }
        std::optional<std::vector<std::size_t>> best;
        Rational best_value;
        std::vector<std::size_t> current = prefix;
        search(prefix.size(), partial, used, current, suffix_max, best, best_value);
        return best;
    }

private:
    void search(std::size_t r, const Rational& partial, std::vector<char>& used, std::vector<std::size_t>& current,
                const std::vector<Rational>& suffix_max, std::optional<std::vector<std::size_t>>& best,
                Rational& best_value) const {
        if (partial.is_zero()) return;
        if (best && partial * suffix_max[r] <= best_value) return;
        if (r == rows_) {
            best = current;
            best_value = partial;
            return;
        }
        for (std::size_t c = 0; c < cols_; ++c) {
            if (used[c] || w_[r][c].sign() <= 0) continue;
            used[c] = 1;
            current.push_back(c);
            search(r + 1, partial * w_[r][c], used, current, suffix_max, best, best_value);
            current.pop_back();
            used[c] = 0;
        }
    }

    const std::vector<std::vector<Rational>>& w_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<long double>> cost_;
};

bool near(long double a, long double b) {
    return std::fabs(a - b) <= kNearTie * std::max(1.0L, std::fabs(b));
}

}  // namespace

std::optional<std::vector<std::size_t>> max_product_assignment(const std::vector<std::vector<Rational>>& weights) {
    Solver solver(weights);
    const std::size_t rows = weights.size();
    const std::size_t cols = rows == 0 ? 0 : weights.front().size();
    if (rows == 0) return std::vector<std::size_t>{};

    auto initial = solver.complete(0, std::vector<char>(cols, 0));
    if (!initial) return std::nullopt;
    Rational best_value = solver.product(*initial);
    std::vector<std::size_t> best = *initial;

    // Fix rows in order to the smallest column that still admits an optimum.
    // Discovering a strictly better assignment restarts the pass.
    for (;;) {
        bool restart = false;
        std::vector<std::size_t> prefix;
        std::vector<char> used(cols, 0);
        Rational prefix_value(1);
        for (std::size_t r = 0; r < rows && !restart; ++r) {
            bool fixed = false;
            for (std::size_t c = 0; c < cols && !fixed && !restart; ++c) {
                if (used[c] || weights[r][c].sign() <= 0) continue;
                used[c] = 1;
                auto rest = solver.complete(r + 1, used);
                used[c] = 0;
                if (!rest) continue;

                std::vector<std::size_t> candidate = prefix;
                candidate.push_back(c);
                candidate.insert(candidate.end(), rest->begin(), rest->end());
                Rational value = solver.product(candidate);
                if (value < best_value && near(solver.log_cost(candidate), -best_value.log())) {
                    std::vector<std::size_t> head = prefix;
                    head.push_back(c);
                    if (auto exact = solver.exhaustive(head)) {
                        candidate = *exact;
                        value = solver.product(candidate);
                    }
                }
                if (value > best_value) {
                    best_value = value;
                    best = candidate;
                    restart = true;
                } else if (value == best_value) {
                    prefix.push_back(c);
                    used[c] = 1;
                    prefix_value *= weights[r][c];
                    fixed = true;
                }
            }
            if (!fixed && !restart) {
                // Floating point missed every optimum through this prefix.
                return solver.exhaustive({});
            }
        }
        if (!restart) return prefix;
    }
}

std::optional<std::vector<std::size_t>> max_product_assignment_exhaustive(
    const std::vector<std::vector<Rational>>& weights) {
    Solver solver(weights);
    return solver.exhaustive({});
}

}  // namespace cirsolve
