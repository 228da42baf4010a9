#pragma once

// Serialization for every artifact the CLI exchanges.  JSON is produced with
// stable key order and shortest-round-trip floats, so a fixed RunConfig yields
// byte-identical files.  Frequencies and multipliers wider than 2^53 are
// emitted as decimal strings (JSON numbers would silently lose precision);
// the parsers accept both forms.

#include "entropylab/construction.hpp"
#include "entropylab/gaussian_lab.hpp"
#include "entropylab/pseudometric.hpp"
#include "entropylab/trigpoly.hpp"

#include <string>
#include <vector>

namespace entropylab::io {

std::string certificate_to_json(const Certificate& cert, const AveragingFamily& family);
// returns the certificate; *family_out (if given) receives the embedded family
Certificate certificate_from_json(const std::string& text, AveragingFamily* family_out = nullptr);

std::string family_to_json(const AveragingFamily& family);
AveragingFamily family_from_json(const std::string& text);

std::string trigpoly_to_json(const TrigPoly& f);
TrigPoly trigpoly_from_json(const std::string& text);

// row-major, header-free
std::string metric_to_csv(const FinitePseudoMetric& m);
FinitePseudoMetric metric_from_csv(const std::string& text);
std::string metric_to_json(const FinitePseudoMetric& m);
FinitePseudoMetric metric_from_json(const std::string& text);

std::string gaussian_family_to_json(const GaussianFamily& fam);
GaussianFamily gaussian_family_from_json(const std::string& text);

std::string mc_report_to_json(const McReport& rep);

std::string entropy_rows_to_csv(const std::vector<EntropyRow>& rows);
std::string sudakov_detail_to_csv(const std::vector<SudakovDetail>& rows);

// minimal line plot (one polyline plus axes); x ascending
std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_label, const std::string& y_label);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace entropylab::io
