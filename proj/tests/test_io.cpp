#include "oracles.hpp"

#include "teig/errors.hpp"
#include "teig/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace teig;
namespace fs = std::filesystem;

namespace {

std::vector<cplx> entries(const Tensor3& A) { return {A.data().begin(), A.data().end()}; }

TensorFile round_trip(const Tensor3& A, const std::string& meta = {}) {
    std::stringstream ss;
    write_tensor(ss, A, meta);
    return read_tensor(ss);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("teig_io_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(TensorFormat, RealRoundTripIsExact) {
    oracle::Gen g(91);
    for (int t = 0; t < 30; ++t) {
        const Tensor3 A = g.tensor(g.index(1, 4), g.index(1, 4), g.index(1, 5), false);
        std::stringstream ss;
        write_tensor(ss, A);
        EXPECT_NE(ss.str().find(" real\n"), std::string::npos);
        const auto back = read_tensor(ss);
        EXPECT_EQ(entries(back.tensor), entries(A));
        EXPECT_TRUE(back.metadata.empty());
    }
}

TEST(TensorFormat, ComplexRoundTripWithMetadata) {
    oracle::Gen g(92);
    const Tensor3 A = g.tensor(2, 3, 4);
    std::stringstream ss;
    write_tensor(ss, A, "family=blur n=2");
    EXPECT_EQ(first_line(ss.str()), "teig-tensor 1");
    EXPECT_NE(ss.str().find("2 3 4 complex\n# family=blur n=2\n"), std::string::npos);
    const auto back = read_tensor(ss);
    EXPECT_EQ(entries(back.tensor), entries(A));
    EXPECT_EQ(back.metadata, "family=blur n=2");
}

TEST(TensorFormat, LayoutIsSliceMajorColumnMajor) {
    Tensor3 A(2, 2, 2);
    double v = 0;
    for (Index k = 0; k < 2; ++k)
        for (Index j = 0; j < 2; ++j)
            for (Index i = 0; i < 2; ++i) A(i, j, k) = v++;
    std::stringstream ss;
    write_tensor(ss, A);
    EXPECT_EQ(ss.str(), "teig-tensor 1\n2 2 2 real\n0\n1\n2\n3\n4\n5\n6\n7\n");
}

TEST(TensorFormat, MalformedInputs) {
    for (const std::string bad : {"", "teig-tensor 2\n1 1 1 real\n0\n", "tensor 1\n1 1 1 real\n0\n",
                                  "teig-tensor 1\n1 1 real\n0\n", "teig-tensor 1\n1 1 1 quaternion\n0\n",
                                  "teig-tensor 1\n0 1 1 real\n", "teig-tensor 1\n2 1 1 real\n0\n",
                                  "teig-tensor 1\n1 1 1 complex\n0\n", "teig-tensor 1\n1 1 1 real\nabc\n"}) {
        std::stringstream ss(bad);
        EXPECT_THROW(read_tensor(ss), ValidationError) << bad;
    }
}

TEST(TensorFormat, FileHelpers) {
    const fs::path d = scratch_dir("files");
    oracle::Gen g(93);
    const Tensor3 A = g.tensor(3, 1, 2);
    save_tensor(d / "a.txt", A, "x");
    const auto back = load_tensor(d / "a.txt");
    EXPECT_EQ(entries(back.tensor), entries(A));
    EXPECT_EQ(back.metadata, "x");
    EXPECT_THROW(load_tensor(d / "missing.txt"), ValidationError);
    fs::remove_all(d);
}

TEST(FormatDouble, Examples) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    oracle::Gen g(94);
    for (int t = 0; t < 100; ++t) {
        const double x = g.normal() * std::pow(10.0, g.index(-20, 20));
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(MatrixCsv, ParsesAndRejects) {
    std::stringstream ok("1,2,3\n4, 5 ,6\n\n");
    const auto M = read_matrix_csv(ok);
    ASSERT_EQ(M.rows(), 2);
    ASSERT_EQ(M.cols(), 3);
    EXPECT_EQ(M(1, 1), 5.0);
    for (const std::string bad : {"1,2\n3\n", "1,x\n", "", "1,2abc\n"}) {
        std::stringstream ss(bad);
        EXPECT_THROW(read_matrix_csv(ss), ValidationError) << bad;
    }
}

TEST(MatrixCsv, SlicesIntoTensor) {
    const fs::path d = scratch_dir("slices");
    std::ofstream(d / "s0.csv") << "1,2\n3,4\n";
    std::ofstream(d / "s1.csv") << "5,6\n7,8\n";
    std::ofstream(d / "bad.csv") << "1,2,3\n";
    const Tensor3 A = load_slices_csv({d / "s0.csv", d / "s1.csv"});
    EXPECT_EQ(A.tubes(), 2);
    EXPECT_EQ(A(1, 0, 0), cplx{3.0});
    EXPECT_EQ(A(0, 1, 1), cplx{6.0});
    EXPECT_THROW(load_slices_csv({d / "s0.csv", d / "bad.csv"}), ValidationError);
    EXPECT_THROW(load_slices_csv({d / "nope.csv"}), ValidationError);
    fs::remove_all(d);
}

TEST(Csv, SpectrumAndTubularHeaders) {
    const auto S = slice_spectra(identity(2, 3));
    std::stringstream ss;
    write_spectrum_csv(ss, S);
    EXPECT_EQ(first_line(ss.str()), "slice,index,re,im");
    EXPECT_NE(ss.str().find("\n2,1,1,0\n"), std::string::npos);
    int lines = 0;
    for (char c : ss.str()) lines += c == '\n';
    EXPECT_EQ(lines, 1 + 6);

    std::stringstream ts;
    const std::vector<Index> sel = {0, 1, 1};
    write_tubular_eigs_csv(ts, {tubular_eig_from_selection(identity(2, 3), sel)});
    EXPECT_EQ(first_line(ts.str()), "selection,k,re,im");
    EXPECT_NE(ts.str().find("\n0|1|1,0,"), std::string::npos);
}

TEST(Csv, HistoryAndSummary) {
    ConvergenceHistory h;
    h.delta = {1.0, 0.01};
    h.seconds = {0.0, 0.5};
    std::stringstream ss;
    write_history_csv(ss, h);
    EXPECT_EQ(ss.str(), "k,delta,log10_delta,rel_error,seconds\n0,1,0,,0\n1,0.01,-2,,0.5\n");
    h.rel_error = {1.0, 0.25};
    std::stringstream tracked;
    write_history_csv(tracked, h);
    EXPECT_NE(tracked.str().find("\n1,0.01,-2,0.25,0.5\n"), std::string::npos);

    std::stringstream rs;
    write_summary_row(rs, {"TR", "alpha_star", 12, 1e-9, std::nan(""), 0.25, "tolerance"});
    EXPECT_EQ(rs.str(), "TR,alpha_star,12,1.0000000000000001e-09,nan,0.25,tolerance\n");
    EXPECT_STREQ(kSummaryHeader, "method,step_param,iters,final_delta,final_rel_error,seconds,stop_reason");
}
