#include "balmet/io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "balmet/errors.hpp"

namespace balmet {

namespace {

void atomic_write(const std::string& path, const std::string& content, bool binary) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, binary ? std::ios::binary | std::ios::out : std::ios::out);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_field_csv(const std::string& path, const std::vector<Mat>& values) {
    std::ostringstream out;
    out << "point,row,col,re,im\n";
    for (std::size_t p = 0; p < values.size(); ++p) {
        const Mat& m = values[p];
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                out << p << ',' << i << ',' << j << ',' << format_double(m(i, j).real())
                    << ',' << format_double(m(i, j).imag()) << '\n';
    }
    atomic_write(path, out.str(), false);
}

std::vector<Mat> read_field_csv(const std::string& path, int rank) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<Mat> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::getline(row, tok, ',');
        const std::size_t p = std::stoul(tok);
        std::getline(row, tok, ',');
        const int i = std::stoi(tok);
        std::getline(row, tok, ',');
        const int j = std::stoi(tok);
        std::getline(row, tok, ',');
        const double re = std::stod(tok);
        std::getline(row, tok, ',');
        const double im = std::stod(tok);
        if (p >= values.size()) values.resize(p + 1, Mat::Zero(rank, rank));
        values[p](i, j) = cxd(re, im);
    }
    return values;
}

void write_inner(const std::string& path, const HermitianInner& h,
                 const std::vector<int>& degrees, int k) {
    const std::int64_t n = h.dim();
    std::string blob;
    blob.reserve(8 + static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * 16);
    blob.append(reinterpret_cast<const char*>(&n), 8);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = h.matrix(i, j).real();
            const double im = h.matrix(i, j).imag();
            blob.append(reinterpret_cast<const char*>(&re), 8);
            blob.append(reinterpret_cast<const char*>(&im), 8);
        }
    atomic_write(path, blob, true);

    nlohmann::json meta;
    meta["degrees"] = degrees;
    meta["k"] = k;
    meta["frame"] = "monomial";
    meta["n"] = n;
    atomic_write(path + ".json", meta.dump(2) + "\n", false);
}

HermitianInner read_inner(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::int64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    if (!in || n <= 0) throw std::runtime_error("bad inner-product header in " + path);
    HermitianInner h;
    h.matrix.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), 8);
            in.read(reinterpret_cast<char*>(&im), 8);
            h.matrix(i, j) = cxd(re, im);
        }
    if (!in) throw std::runtime_error("truncated inner-product file: " + path);
    return h;
}

void write_flow_trace_csv(const std::string& path, const FlowTrace& trace) {
    std::ostringstream out;
    out << "t,mu0_norm,dk_ref,sup_err,lam_min,lam_max,cond_max\n";
    for (const auto& s : trace.samples) {
        if (s.has_moment && std::abs(s.mu0_trace) > 1e-9)
            throw std::runtime_error("flow trace row violates tr(mu0)=0: " +
                                     format_double(s.mu0_trace));
        out << format_double(s.t) << ',' << format_double(s.mu0_norm) << ','
            << format_double(s.dk_ref) << ',' << format_double(s.sup_err) << ','
            << format_double(s.lam_min) << ',' << format_double(s.lam_max) << ','
            << format_double(s.cond_max) << '\n';
    }
    atomic_write(path, out.str(), false);
}

void write_text_file(const std::string& path, const std::string& content) {
    atomic_write(path, content, false);
}

}  // namespace balmet
