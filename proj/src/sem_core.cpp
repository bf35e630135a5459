#include "revsem/sem_core.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "revsem/errors.hpp"

namespace revsem {

int RamMatrices::index_of(const std::string& variable) const {
    auto it = std::find(variables.begin(), variables.end(), variable);
    if (it == variables.end()) throw EstimationError("unknown variable in RAM roster: " + variable);
    return static_cast<int>(it - variables.begin());
}

void RamMatrices::fill(const Eigen::VectorXd& theta, Eigen::MatrixXd& a,
                       Eigen::MatrixXd& s) const {
    a = fixed_a;
    s = fixed_s;
    for (int k = 0; k < n_free(); ++k) {
        for (const auto& cell : param_cells[k]) {
            if (cell.matrix == 'A') {
                a(cell.row, cell.col) = theta[k];
            } else {
                s(cell.row, cell.col) = theta[k];
                s(cell.col, cell.row) = theta[k];
            }
        }
    }
}

std::string RamMatrices::debug_dump(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd a, s;
    fill(theta, a, s);
    std::ostringstream out;
    out << "variables:";
    for (const auto& v : variables) out << " " << v;
    out << "\nobserved: " << n_observed << "\nA:\n" << a << "\nS:\n" << s << "\n";
    return out.str();
}

RamMatrices build_ram(const ParameterTable& table,
                      const std::vector<std::string>& observed_order) {
    RamMatrices ram;
    ram.variables = observed_order;
    ram.n_observed = static_cast<int>(observed_order.size());
    for (const auto& latent : table.latents) ram.variables.push_back(latent);

    const int n = static_cast<int>(ram.variables.size());
    ram.fixed_a = Eigen::MatrixXd::Zero(n, n);
    ram.fixed_s = Eigen::MatrixXd::Zero(n, n);

    // occupied[matrix][cell] -> source line, for duplicate detection
    std::map<std::tuple<char, int, int>, int> occupied;
    auto claim = [&](char matrix, int row, int col, int line) {
        auto key = std::make_tuple(matrix, row, col);
        auto [it, fresh] = occupied.emplace(key, line);
        if (!fresh) {
            std::ostringstream msg;
            msg << "conflicting parameter assignments for matrix " << matrix << " cell ("
                << row << "," << col << "): statements at lines " << it->second << " and "
                << line;
            throw ParseError(msg.str());
        }
    };

    for (const auto& row : table.rows) {
        if (row.op == ":=") {
            ram.defined.push_back(DefinedParam{row.lhs, row.expr});
            ram.table_row_param.push_back(-2);
            continue;
        }
        CellRef cell;
        if (row.op == "~") {
            cell = {'A', ram.index_of(row.lhs), ram.index_of(row.rhs)};
        } else if (row.op == "=~") {
            // loading: latent (lhs) -> indicator (rhs)
            cell = {'A', ram.index_of(row.rhs), ram.index_of(row.lhs)};
        } else {  // "~~"
            int i = ram.index_of(row.lhs);
            int j = ram.index_of(row.rhs);
            cell = {'S', std::max(i, j), std::min(i, j)};
        }
        claim(cell.matrix, cell.row, cell.col, row.source_line);

        if (!row.free) {
            ram.table_row_param.push_back(-1);
            double value = row.fixed_value.value_or(0.0);
            if (cell.matrix == 'A') {
                ram.fixed_a(cell.row, cell.col) = value;
            } else {
                ram.fixed_s(cell.row, cell.col) = value;
                ram.fixed_s(cell.col, cell.row) = value;
            }
            continue;
        }
        int index;
        if (row.label && ram.label_to_param.count(*row.label)) {
            index = ram.label_to_param.at(*row.label);  // equated parameter
        } else {
            index = ram.n_free();
            ram.param_cells.emplace_back();
            ram.param_names.push_back(row.label ? *row.label
                                                : row.lhs + row.op + row.rhs);
            ram.param_lhs.push_back(row.lhs);
            ram.param_op.push_back(row.op);
            ram.param_rhs.push_back(row.rhs);
            ram.start.push_back(row.start);
            ram.is_variance.push_back(row.op == "~~" && row.lhs == row.rhs);
            if (row.label) ram.label_to_param[*row.label] = index;
        }
        ram.param_cells[index].push_back(cell);
        ram.table_row_param.push_back(index);
    }
    return ram;
}

namespace {

// Returns (I-A)^-1, or nullopt when (I-A) is numerically singular.
std::optional<Eigen::MatrixXd> inverse_i_minus_a(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - a;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) return std::nullopt;
    return lu.inverse();
}

}  // namespace

ImpliedMoments implied_cov(const RamMatrices& ram, const Eigen::VectorXd& theta) {
    ImpliedMoments out;
    Eigen::MatrixXd a, s;
    ram.fill(theta, a, s);
    auto b = inverse_i_minus_a(a);
    if (!b) {
        out.admissible = false;
        return out;
    }
    Eigen::MatrixXd full = (*b) * s * b->transpose();
    out.sigma = full.topLeftCorner(ram.n_observed, ram.n_observed);
    out.sigma = ((out.sigma + out.sigma.transpose()) / 2.0).eval();
    return out;
}

ImpliedWithDerivatives implied_cov_with_derivatives(const RamMatrices& ram,
                                                    const Eigen::VectorXd& theta) {
    ImpliedWithDerivatives out;
    Eigen::MatrixXd a, s;
    ram.fill(theta, a, s);
    auto b_opt = inverse_i_minus_a(a);
    if (!b_opt) {
        out.admissible = false;
        return out;
    }
    const Eigen::MatrixXd& b = *b_opt;
    const int p = ram.n_observed;
    Eigen::MatrixXd m = b * s * b.transpose();  // full-roster implied covariance
    out.sigma = m.topLeftCorner(p, p);
    out.sigma = ((out.sigma + out.sigma.transpose()) / 2.0).eval();

    out.dsigma.resize(ram.n_free());
    for (int k = 0; k < ram.n_free(); ++k) {
        Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(m.rows(), m.cols());
        for (const auto& cell : ram.param_cells[k]) {
            if (cell.matrix == 'A') {
                // d((I-A)^-1)/dA_rc = B E_rc B, so dM = B.col(r) M.row(c) + sym
                Eigen::MatrixXd t = b.col(cell.row) * m.row(cell.col);
                dm += t + t.transpose();
            } else if (cell.row == cell.col) {
                dm += b.col(cell.row) * b.col(cell.col).transpose();
            } else {
                Eigen::MatrixXd t = b.col(cell.row) * b.col(cell.col).transpose();
                dm += t + t.transpose();
            }
        }
        out.dsigma[k] = dm.topLeftCorner(p, p);
    }
    return out;
}

int count_df(const ParameterTable& table, int p) {
    int moments = p * (p + 1) / 2;
    int free = static_cast<int>(table.free_count());
    int df = moments - free;
    if (df < 0) {
        std::ostringstream msg;
        msg << "model is under-identified by counting: " << free << " free parameters exceed "
            << moments << " covariance moments";
        throw EstimationError(msg.str());
    }
    return df;
}

}  // namespace revsem
