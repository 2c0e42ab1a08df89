#include "teig/io.hpp"

#include "teig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace teig {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_tensor(std::ostream& os, const Tensor3& A, const std::string& metadata) {
    const bool real = std::all_of(A.data().begin(), A.data().end(), [](const cplx& v) { return v.imag() == 0.0; });
    os << "teig-tensor 1\n" << A.rows() << ' ' << A.cols() << ' ' << A.tubes() << ' ' << (real ? "real" : "complex")
       << '\n';
    if (!metadata.empty()) os << "# " << metadata << '\n';
    for (const auto& v : A.data()) {
        os << format_double(v.real());
        if (!real) os << ' ' << format_double(v.imag());
        os << '\n';
    }
}

TensorFile read_tensor(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "teig-tensor" || version != 1)
        throw ValidationError("tensor file: bad header");
    Index n = 0, m = 0, p = 0;
    std::string kind;
    if (!(is >> n >> m >> p >> kind) || (kind != "real" && kind != "complex"))
        throw ValidationError("tensor file: bad shape line");
    if (n < 1 || m < 1 || p < 1) throw ValidationError("tensor file: extents must be positive");
    TensorFile out;
    is >> std::ws;
    if (is.peek() == '#') {
        std::getline(is, out.metadata);
        out.metadata.erase(0, out.metadata.find_first_not_of("# "));
    }
    out.tensor = Tensor3(n, m, p);
    for (auto& v : out.tensor.mutable_data()) {
        double re = 0.0, im = 0.0;
        if (!(is >> re) || (kind == "complex" && !(is >> im))) throw ValidationError("tensor file: truncated entries");
        v = cplx{re, im};
    }
    return out;
}

void save_tensor(const std::filesystem::path& path, const Tensor3& A, const std::string& metadata) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
    write_tensor(os, A, metadata);
}

TensorFile load_tensor(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path.string());
    return read_tensor(is);
}

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ValidationError("csv: non-numeric cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) throw ValidationError("csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError("csv: empty matrix");
    Eigen::MatrixXd M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return M;
}

Tensor3 load_slices_csv(const std::vector<std::filesystem::path>& slice_files) {
    std::vector<Eigen::MatrixXcd> slices;
    for (const auto& f : slice_files) {
        std::ifstream is(f);
        if (!is) throw ValidationError("cannot open " + f.string());
        slices.push_back(read_matrix_csv(is).cast<cplx>());
    }
    try {
        return Tensor3::from_slices(slices);
    } catch (const ShapeError& e) {
        throw ValidationError(e.what());
    }
}

void write_spectrum_csv(std::ostream& os, const SliceSpectrum& S) {
    os << "slice,index,re,im\n";
    for (Index i = 0; i < S.p; ++i) {
        const auto& v = S.values[static_cast<std::size_t>(i)];
        for (Index j = 0; j < v.size(); ++j)
            os << i << ',' << j << ',' << format_double(v(j).real()) << ',' << format_double(v(j).imag()) << '\n';
    }
}

void write_tubular_eigs_csv(std::ostream& os, const std::vector<TubularEigenPair>& pairs) {
    os << "selection,k,re,im\n";
    for (const auto& pr : pairs) {
        std::string sel;
        for (std::size_t i = 0; i < pr.selection.size(); ++i) sel += (i ? "|" : "") + std::to_string(pr.selection[i]);
        for (Index k = 0; k < pr.lambda.length(); ++k)
            os << sel << ',' << k << ',' << format_double(pr.lambda[k].real()) << ','
               << format_double(pr.lambda[k].imag()) << '\n';
    }
}

void write_history_csv(std::ostream& os, const ConvergenceHistory& h) {
    os << "k,delta,log10_delta,rel_error,seconds\n";
    for (std::size_t k = 0; k < h.delta.size(); ++k) {
        os << k << ',' << format_double(h.delta[k]) << ',' << format_double(std::log10(h.delta[k])) << ',';
        if (k < h.rel_error.size()) os << format_double(h.rel_error[k]);
        os << ',' << format_double(h.seconds[k]) << '\n';
    }
}

void write_summary_row(std::ostream& os, const SummaryRow& r) {
    os << r.method << ',' << r.step_param << ',' << r.iters << ',' << format_double(r.final_delta) << ','
       << format_double(r.final_rel_error) << ',' << format_double(r.seconds) << ',' << r.stop_reason << '\n';
}

} // namespace teig
