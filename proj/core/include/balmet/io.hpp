// io.hpp - file formats: field CSV, inner-product binary, flow-trace CSV
#pragma once

#include <string>
#include <vector>

#include "balmet/bergman.hpp"
#include "balmet/fields.hpp"
#include "balmet/flows.hpp"

namespace balmet {

// All writers are atomic (temp file + rename) and print floating point with
// 17 significant digits.
std::string format_double(double x);

// CSV of (point index, row, col, re, im); one line per matrix entry.
void write_field_csv(const std::string& path, const std::vector<Mat>& values);
std::vector<Mat> read_field_csv(const std::string& path, int rank);

// Row-major complex binary with an 8-byte little-endian N_k header, plus a
// JSON sidecar <path>.json carrying degrees, k, and frame = "monomial".
void write_inner(const std::string& path, const HermitianInner& h,
                 const std::vector<int>& degrees, int k);
HermitianInner read_inner(const std::string& path);

// CSV with header t,mu0_norm,dk_ref,sup_err,lam_min,lam_max,cond_max.
// Re-checks tr(mu0) = 0 on rows where the moment diagnostics were recorded.
void write_flow_trace_csv(const std::string& path, const FlowTrace& trace);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace balmet
