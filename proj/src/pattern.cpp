#include "qinv/pattern.hpp"

namespace qinv {

Pattern Pattern::from_rows(const std::vector<std::vector<int>>& rows) {
    Pattern p;
    p.rows = static_cast<int>(rows.size());
    p.cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    for (const auto& row : rows) {
        require(static_cast<int>(row.size()) == p.cols, "Pattern: ragged rows");
        for (int v : row) p.entries.push_back(v != 0);
    }
    return p;
}

int Pattern::count() const {
    int n = 0;
    for (bool b : entries) n += b ? 1 : 0;
    return n;
}

Pattern bool_product(const Pattern& a, const Pattern& b) {
    require(a.cols == b.rows, "bool_product: inner dimensions must agree");
    Pattern out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) {
            if (!a.at(i, j)) continue;
            for (int k = 0; k < b.cols; ++k) {
                if (b.at(j, k)) out.set(i, k, true);
            }
        }
    }
    return out;
}

QiReport pattern_qi_check(const Pattern& s, const Pattern& g) {
    require(s.cols == g.rows && s.rows == g.cols,
            "pattern_qi_check: S must be n_u x n_y and G n_y x n_u");
    QiReport report;
    // Scan quadruples (i,l,j,k): S(i,l), G(l,j), S(j,k) allowed, S(i,k) not.
    for (int i = 0; i < s.rows; ++i) {
        for (int l = 0; l < s.cols; ++l) {
            if (!s.at(i, l)) continue;
            for (int j = 0; j < g.cols; ++j) {
                if (!g.at(l, j)) continue;
                for (int k = 0; k < s.cols; ++k) {
                    if (s.at(j, k) && !s.at(i, k)) {
                        report.qi = false;
                        report.witness_indices = {i, l, j, k};
                        Matrix w = Matrix::Zero(s.rows, s.cols);
                        w(i, l) = 1.0;
                        w(j, k) = 1.0;
                        report.witness_controller = w;
                        report.witness_residual = 1.0;  // structural violation
                        report.detail =
                            "support of S*G*S exceeds S at entry (" + std::to_string(i) + "," +
                            std::to_string(k) + ") via S(" + std::to_string(i) + "," +
                            std::to_string(l) + ")*G(" + std::to_string(l) + "," +
                            std::to_string(j) + ")*S(" + std::to_string(j) + "," +
                            std::to_string(k) + ")";
                        return report;
                    }
                }
            }
        }
    }
    report.detail = "support of S*G*S is contained in S";
    return report;
}

SubspaceBasis pattern_to_basis(const Pattern& s) {
    std::vector<Matrix> elements;
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            if (s.at(i, j)) {
                Matrix e = Matrix::Zero(s.rows, s.cols);
                e(i, j) = 1.0;
                elements.push_back(std::move(e));
            }
        }
    }
    return SubspaceBasis(std::move(elements));
}

FirSubspace pattern_to_fir_basis(const Pattern& s, int horizon) {
    std::vector<FirTransferMatrix> elements;
    for (int k = 0; k <= horizon; ++k) {
        for (int i = 0; i < s.rows; ++i) {
            for (int j = 0; j < s.cols; ++j) {
                if (!s.at(i, j)) continue;
                FirTransferMatrix e = FirTransferMatrix::zero(s.rows, s.cols, horizon);
                e.tap(k)(i, j) = 1.0;
                elements.push_back(std::move(e));
            }
        }
    }
    return FirSubspace(std::move(elements));
}

Pattern support_of(const Matrix& m, double tol) {
    Pattern p(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < p.rows; ++i) {
        for (int j = 0; j < p.cols; ++j) {
            p.set(i, j, std::abs(m(i, j)) > tol);
        }
    }
    return p;
}

}  // namespace qinv
