#pragma once

// Text formats.
//
// Tensor file:
//   teig-tensor 1
//   <n> <m> <p> <real|complex>
//   # <metadata>            (optional, one line)
//   one entry per line in storage order (slice-major, column-major within a
//   slice): "re" for real files, "re im" for complex files.
//
// Slice CSV: one frontal slice per file, comma-separated real values, one
// matrix row per line.

#include "teig/solvers.hpp"
#include "teig/spectra.hpp"
#include "teig/tensor3.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace teig {

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

struct TensorFile {
    Tensor3 tensor;
    std::string metadata;
};

/// Writes real storage when every imaginary part is exactly zero.
void write_tensor(std::ostream& os, const Tensor3& A, const std::string& metadata = {});
/// Throws ValidationError on malformed input.
TensorFile read_tensor(std::istream& is);
void save_tensor(const std::filesystem::path& path, const Tensor3& A, const std::string& metadata = {});
TensorFile load_tensor(const std::filesystem::path& path);

/// Throws ValidationError on ragged rows or non-numeric cells.
Eigen::MatrixXd read_matrix_csv(std::istream& is);
Tensor3 load_slices_csv(const std::vector<std::filesystem::path>& slice_files);

/// Columns slice,index,re,im.
void write_spectrum_csv(std::ostream& os, const SliceSpectrum& S);
/// Columns selection,k,re,im; selection is the index tuple joined by '|'.
void write_tubular_eigs_csv(std::ostream& os, const std::vector<TubularEigenPair>& pairs);

/// Columns k,delta,log10_delta,rel_error,seconds; rel_error is empty when
/// no solution was tracked.
void write_history_csv(std::ostream& os, const ConvergenceHistory& h);

struct SummaryRow {
    std::string method;
    std::string step_param;
    int iters = 0;
    double final_delta = 0.0;
    /// NaN when no solution was tracked.
    double final_rel_error = 0.0;
    double seconds = 0.0;
    std::string stop_reason;
};

inline constexpr const char* kSummaryHeader =
    "method,step_param,iters,final_delta,final_rel_error,seconds,stop_reason";
void write_summary_row(std::ostream& os, const SummaryRow& row);

} // namespace teig
