#include "freelunch/lp.hpp"

#include "freelunch/errors.hpp"

#include <cstddef>

namespace freelunch::lp {

Problem::Problem(int n)
    : num_vars(n),
      objective(static_cast<std::size_t>(n)),
      lower(static_cast<std::size_t>(n), Rational(0)),
      upper(static_cast<std::size_t>(n)) {}

namespace {

using Index = std::size_t;

enum class RowKind { equality, inequality, bound };

struct RowOrigin {
    RowKind kind;
    Index user_row;  // or variable index for bound rows
    int sign;        // +1 or -1 applied to make rhs nonnegative
};

// x_j = shift_j + sum over parts (sign * column)
struct VarMap {
    Rational shift;
    std::vector<std::pair<Index, int>> parts;
};

class Tableau {
public:
    Tableau(Index rows, Index cols) : rows_(rows), cols_(cols), cells_(rows * (cols + 1)), obj_(cols + 1), basis_(rows) {}

    Rational& at(Index i, Index j) { return cells_[i * (cols_ + 1) + j]; }
    const Rational& at(Index i, Index j) const { return cells_[i * (cols_ + 1) + j]; }
    Rational& rhs(Index i) { return at(i, cols_); }
    Rational& reduced(Index j) { return obj_[j]; }
    // obj_[cols_] holds minus the objective value of the basis
    Rational& value() { return obj_[cols_]; }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    std::vector<Index>& basis() { return basis_; }

    void pivot(Index r, Index c) {
        const Rational inv = 1 / at(r, c);
        for (Index j = 0; j <= cols_; ++j) at(r, j) *= inv;
        for (Index i = 0; i < rows_; ++i) {
            if (i == r || at(i, c) == 0) continue;
            const Rational factor = at(i, c);
            for (Index j = 0; j <= cols_; ++j)
                if (at(r, j) != 0) at(i, j) -= factor * at(r, j);
        }
        if (obj_[c] != 0) {
            const Rational factor = obj_[c];
            for (Index j = 0; j <= cols_; ++j)
                if (at(r, j) != 0) obj_[j] -= factor * at(r, j);
        }
        basis_[r] = c;
    }

    // Bland's rule maximization over columns [0, allowed). Returns false if unbounded.
    bool maximize(Index allowed) {
        for (;;) {
            Index enter = allowed;
            for (Index j = 0; j < allowed; ++j)
                if (obj_[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter == allowed) return true;
            Index leave = rows_;
            Rational best;
            for (Index i = 0; i < rows_; ++i) {
                if (at(i, enter) <= 0) continue;
                Rational ratio = rhs(i) / at(i, enter);
                if (leave == rows_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
        }
    }

    void set_objective(const Vec& cost) {
        for (Index j = 0; j < cols_; ++j) obj_[j] = cost[j];
        obj_[cols_] = 0;
        for (Index i = 0; i < rows_; ++i) {
            const Rational& cb = cost[basis_[i]];
            if (cb == 0) continue;
            for (Index j = 0; j <= cols_; ++j) obj_[j] -= cb * at(i, j);
        }
    }

private:
    Index rows_, cols_;
    std::vector<Rational> cells_;
    std::vector<Rational> obj_;
    std::vector<Index> basis_;
};

void check_dimensions(const Problem& p) {
    const auto n = static_cast<Index>(p.num_vars);
    if (p.num_vars < 0 || p.objective.size() != n || p.lower.size() != n || p.upper.size() != n)
        throw InvalidInput("lp: objective/bounds length differs from variable count");
    for (const auto& c : p.equalities)
        if (c.row.size() != n) throw InvalidInput("lp: equality row length mismatch");
    for (const auto& c : p.inequalities)
        if (c.row.size() != n) throw InvalidInput("lp: inequality row length mismatch");
}

Rational dot(const Vec& a, const Vec& b) {
    Rational s = 0;
    for (Index i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace

Outcome solve(const Problem& p) {
    check_dimensions(p);
    const auto n = static_cast<Index>(p.num_vars);

    // Column layout: structural parts, then slacks, then artificials.
    std::vector<VarMap> vars(n);
    Index structural = 0;
    std::vector<RowOrigin> origin;
    for (Index j = 0; j < n; ++j) {
        if (p.lower[j]) {
            vars[j].shift = *p.lower[j];
            vars[j].parts.push_back({structural++, 1});
            if (p.upper[j]) origin.push_back({RowKind::bound, j, 1});
        } else if (p.upper[j]) {
            vars[j].shift = *p.upper[j];
            vars[j].parts.push_back({structural++, -1});
        } else {
            vars[j].parts.push_back({structural++, 1});
            vars[j].parts.push_back({structural++, -1});
        }
    }
    std::vector<RowOrigin> rows;
    for (Index i = 0; i < p.equalities.size(); ++i) rows.push_back({RowKind::equality, i, 1});
    for (Index i = 0; i < p.inequalities.size(); ++i) rows.push_back({RowKind::inequality, i, 1});
    rows.insert(rows.end(), origin.begin(), origin.end());

    const Index m = rows.size();
    Index slacks = 0;
    for (const auto& r : rows)
        if (r.kind != RowKind::equality) ++slacks;
    const Index art0 = structural + slacks;
    const Index cols = art0 + m;
    Tableau tab(m, cols);

    Index next_slack = structural;
    for (Index i = 0; i < m; ++i) {
        auto& r = rows[i];
        Vec user_row(n);
        Rational rhs;
        if (r.kind == RowKind::bound) {
            user_row[r.user_row] = 1;
            rhs = *p.upper[r.user_row];
        } else {
            const auto& c = r.kind == RowKind::equality ? p.equalities[r.user_row] : p.inequalities[r.user_row];
            user_row = c.row;
            rhs = c.rhs;
        }
        for (Index j = 0; j < n; ++j) {
            if (user_row[j] == 0) continue;
            rhs -= user_row[j] * vars[j].shift;
            for (const auto& [col, sign] : vars[j].parts) tab.at(i, col) = sign * user_row[j];
        }
        if (r.kind != RowKind::equality) tab.at(i, next_slack++) = 1;
        if (rhs < 0) {
            r.sign = -1;
            for (Index j = 0; j < art0; ++j) tab.at(i, j) = -tab.at(i, j);
            rhs = -rhs;
        }
        tab.rhs(i) = rhs;
        tab.at(i, art0 + i) = 1;
        tab.basis()[i] = art0 + i;
    }

    // Phase 1: maximize -sum(artificials).
    Vec phase1(cols);
    for (Index i = 0; i < m; ++i) phase1[art0 + i] = -1;
    tab.set_objective(phase1);
    tab.maximize(art0);

    auto user_duals = [&](auto&& row_dual, Outcome& out) {
        out.eq_duals.assign(p.equalities.size(), Rational(0));
        out.ineq_duals.assign(p.inequalities.size(), Rational(0));
        for (Index i = 0; i < m; ++i) {
            const Rational mu = row_dual(i) * rows[i].sign;
            if (rows[i].kind == RowKind::equality) out.eq_duals[rows[i].user_row] = mu;
            else if (rows[i].kind == RowKind::inequality) out.ineq_duals[rows[i].user_row] = mu;
        }
    };

    Outcome out;
    if (tab.value() != 0) {
        // y_k = -1 - d(artificial k); z = y proves infeasibility of the standard form
        out.status = Status::infeasible;
        Outcome tmp;
        user_duals([&](Index i) { return Rational(-1 - tab.reduced(art0 + i)); }, tmp);
        out.farkas = Farkas{std::move(tmp.eq_duals), std::move(tmp.ineq_duals)};
        return out;
    }

    for (Index i = 0; i < m; ++i) {
        if (tab.basis()[i] < art0) continue;
        for (Index j = 0; j < art0; ++j)
            if (tab.at(i, j) != 0) {
                tab.pivot(i, j);
                break;
            }
    }

    Vec phase2(cols);
    for (Index j = 0; j < n; ++j)
        for (const auto& [col, sign] : vars[j].parts) phase2[col] += sign * p.objective[j];
    tab.set_objective(phase2);
    if (!tab.maximize(art0)) {
        out.status = Status::unbounded;
        return out;
    }

    Vec column_value(cols);
    for (Index i = 0; i < m; ++i) column_value[tab.basis()[i]] = tab.rhs(i);
    out.status = Status::optimal;
    out.solution.resize(n);
    for (Index j = 0; j < n; ++j) {
        Rational x = vars[j].shift;
        for (const auto& [col, sign] : vars[j].parts) x += sign * column_value[col];
        out.solution[j] = x;
    }
    out.objective_value = dot(p.objective, out.solution);
    user_duals([&](Index i) { return Rational(-tab.reduced(art0 + i)); }, out);
    return out;
}

std::vector<std::string> violations(const Problem& p, const Vec& x) {
    check_dimensions(p);
    std::vector<std::string> out;
    if (x.size() != static_cast<Index>(p.num_vars)) return {"solution length mismatch"};
    for (Index i = 0; i < p.equalities.size(); ++i)
        if (dot(p.equalities[i].row, x) != p.equalities[i].rhs) out.push_back("equality " + std::to_string(i));
    for (Index i = 0; i < p.inequalities.size(); ++i)
        if (dot(p.inequalities[i].row, x) > p.inequalities[i].rhs) out.push_back("inequality " + std::to_string(i));
    for (Index j = 0; j < x.size(); ++j) {
        if (p.lower[j] && x[j] < *p.lower[j]) out.push_back("lower bound " + std::to_string(j));
        if (p.upper[j] && x[j] > *p.upper[j]) out.push_back("upper bound " + std::to_string(j));
    }
    return out;
}

bool verify_farkas(const Problem& p, const Farkas& cert) {
    check_dimensions(p);
    if (cert.eq.size() != p.equalities.size() || cert.ineq.size() != p.inequalities.size()) return false;
    const auto n = static_cast<Index>(p.num_vars);
    Vec r(n);
    Rational rho = 0;
    for (Index i = 0; i < p.equalities.size(); ++i) {
        for (Index j = 0; j < n; ++j) r[j] += cert.eq[i] * p.equalities[i].row[j];
        rho += cert.eq[i] * p.equalities[i].rhs;
    }
    for (Index i = 0; i < p.inequalities.size(); ++i) {
        if (cert.ineq[i] < 0) return false;
        for (Index j = 0; j < n; ++j) r[j] += cert.ineq[i] * p.inequalities[i].row[j];
        rho += cert.ineq[i] * p.inequalities[i].rhs;
    }
    Rational lowest = 0;
    for (Index j = 0; j < n; ++j) {
        if (r[j] > 0) {
            if (!p.lower[j]) return false;
            lowest += r[j] * *p.lower[j];
        } else if (r[j] < 0) {
            if (!p.upper[j]) return false;
            lowest += r[j] * *p.upper[j];
        }
    }
    return lowest > rho;
}

}  // namespace freelunch::lp
