#include "entropylab/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace entropylab::io {

namespace {

// |v| < 2^53 round-trips as a JSON number; anything wider goes out in decimal
json mpz_to_json(const mpz_class& v) {
    static const mpz_class lim = mpz_class(1) << 53;
    if (abs(v) < lim) return json(v.get_si());
    return json(v.get_str());
}

mpz_class mpz_from_json(const json& j) {
    if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return mpz_class(j.get<std::string>());
    throw std::invalid_argument("expected integer or decimal string");
}

[[noreturn]] void bad(const std::string& what) {
    throw std::invalid_argument("malformed artifact: " + what);
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad("not valid JSON");
    return j;
}

} // namespace

std::string family_to_json(const AveragingFamily& family) {
    json j;
    j["kind"] = family.id();
    j["length"] = family.length;
    j["values"] = family.values;  // empty except for explicit families
    return j.dump(2) + "\n";
}

AveragingFamily family_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.contains("kind")) bad("family without kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "explicit") {
        auto vals = j.at("values").get<std::vector<double>>();
        return AveragingFamily::explicit_list(std::move(vals));
    }
    long length = j.value("length", 0l);
    if (kind == "reciprocal")
        return length > 0 ? AveragingFamily::reciprocal(length) : AveragingFamily::reciprocal();
    if (kind == "dyadic")
        return length > 0 ? AveragingFamily::dyadic(length) : AveragingFamily::dyadic();
    bad("unknown family kind '" + kind + "'");
}

std::string certificate_to_json(const Certificate& cert, const AveragingFamily& family) {
    json j;
    j["r"] = cert.r;
    j["J"] = cert.J;
    json ms = json::array();
    for (const auto& m : cert.m) ms.push_back(mpz_to_json(m));
    j["m"] = std::move(ms);
    j["family"] = json{{"kind", family.id()},
                       {"length", family.length},
                       {"values", family.values}};
    j["margins"] = json{{"worst_zero_case", cert.worst_zero_case},
                        {"worst_one_case", cert.worst_one_case}};
    j["verified_mode"] = cert.verified_mode;
    j["seed"] = cert.seed;
    return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text, AveragingFamily* family_out) {
    json j = parse(text);
    Certificate cert;
    try {
        cert.r = j.at("r").get<int>();
        cert.J = j.at("J").get<std::vector<long>>();
        for (const auto& mv : j.at("m")) cert.m.push_back(mpz_from_json(mv));
        cert.verified_mode = j.value("verified_mode", "");
        cert.seed = j.value("seed", uint64_t{0});
        if (j.contains("margins")) {
            cert.worst_zero_case = j["margins"].value("worst_zero_case", 0.0);
            cert.worst_one_case = j["margins"].value("worst_one_case", 2.0);
        }
        AveragingFamily fam = family_from_json(j.at("family").dump());
        cert.family_id = fam.id();
        if (family_out) *family_out = std::move(fam);
    } catch (const json::exception& e) {
        bad(std::string("certificate: ") + e.what());
    }
    if (cert.r < 1 || cert.J.size() != static_cast<std::size_t>(cert.r) ||
        cert.m.size() != static_cast<std::size_t>(cert.r))
        bad("certificate r/J/m size mismatch");
    return cert;
}

std::string trigpoly_to_json(const TrigPoly& f) {
    json arr = json::array();
    for (const auto& [k, v] : f.coeffs())  // std::map: already sorted by k
        arr.push_back(json{{"k", mpz_to_json(k)}, {"re", v.real()}, {"im", v.imag()}});
    return arr.dump(2) + "\n";
}

TrigPoly trigpoly_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.is_array()) bad("trig polynomial must be a JSON array");
    TrigPoly::Coeffs c;
    for (const auto& e : j) {
        try {
            mpz_class k = mpz_from_json(e.at("k"));
            c[k] += std::complex<double>(e.at("re").get<double>(), e.at("im").get<double>());
        } catch (const json::exception& ex) {
            bad(std::string("trig polynomial entry: ") + ex.what());
        }
    }
    return TrigPoly(std::move(c));
}

std::string metric_to_csv(const FinitePseudoMetric& m) {
    std::ostringstream out;
    char buf[64];
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t jx = 0; jx < m.size(); ++jx) {
            std::snprintf(buf, sizeof buf, "%.17g", m.dist(i, jx));
            out << (jx ? "," : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

FinitePseudoMetric metric_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                bad("distance CSV cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) bad("empty distance CSV");
    return FinitePseudoMetric::validate(std::move(rows));
}

std::string metric_to_json(const FinitePseudoMetric& m) {
    json j;
    j["size"] = m.size();
    j["dist"] = m.matrix();
    return j.dump(2) + "\n";
}

FinitePseudoMetric metric_from_json(const std::string& text) {
    json j = parse(text);
    try {
        auto d = j.at("dist").get<std::vector<std::vector<double>>>();
        if (j.contains("size") && j["size"].get<std::size_t>() != d.size())
            bad("distance JSON size field disagrees with matrix");
        return FinitePseudoMetric::validate(std::move(d));
    } catch (const json::exception& e) {
        bad(std::string("distance JSON: ") + e.what());
    }
}

std::string gaussian_family_to_json(const GaussianFamily& fam) {
    json j;
    j["A"] = fam.A;
    return j.dump(2) + "\n";
}

GaussianFamily gaussian_family_from_json(const std::string& text) {
    json j = parse(text);
    GaussianFamily fam;
    try {
        fam.A = j.at("A").get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
        bad(std::string("Gaussian family: ") + e.what());
    }
    fam.check();
    return fam;
}

std::string mc_report_to_json(const McReport& rep) {
    json j;
    j["estimate"] = rep.estimate;
    j["std_error"] = rep.std_error;
    j["samples"] = rep.samples;
    if (rep.bound) j["bound"] = *rep.bound;
    j["verdict"] = to_string(rep.verdict);
    j["note"] = rep.note;
    return j.dump(2) + "\n";
}

std::string entropy_rows_to_csv(const std::vector<EntropyRow>& rows) {
    std::ostringstream out;
    out << "delta,covering,packing\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.delta);
        out << buf << "," << r.covering << "," << r.packing << "\n";
    }
    return out.str();
}

std::string sudakov_detail_to_csv(const std::vector<SudakovDetail>& rows) {
    std::ostringstream out;
    out << "delta,covering,numerator\n";
    char buf[64], buf2[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.delta);
        std::snprintf(buf2, sizeof buf2, "%.17g", r.numerator);
        out << buf << "," << r.covering << "," << buf2 << "\n";
    }
    return out.str();
}

std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& x_label, const std::string& y_label) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("plot needs matching nonempty x/y");
    const int W = 640, H = 420, ml = 60, mr = 20, mt = 20, mb = 50;
    double x0 = x.front(), x1 = x.front(), y0 = y.front(), y1 = y.front();
    for (std::size_t i = 0; i < x.size(); ++i) {
        x0 = std::min(x0, x[i]); x1 = std::max(x1, x[i]);
        y0 = std::min(y0, y[i]); y1 = std::max(y1, y[i]);
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    y0 = std::min(y0, 0.0);
    auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (v - y0) / (y1 - y0) * (H - mt - mb); };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", ml,
                  H - mb, W - mr, H - mb);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", ml, mt,
                  ml, H - mb);
    out << buf;
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x[i]), py(y[i]));
        out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
                  (ml + W - mr) / 2, H - 12, x_label.c_str());
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 16 %d)\">%s</text>\n",
                  (mt + H - mb) / 2, (mt + H - mb) / 2, y_label.c_str());
    out << buf;
    // extremal tick labels
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\">%.4g</text>\n", ml, H - mb + 16, x0);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\" text-anchor=\"end\">%.4g</text>\n",
                  W - mr, H - mb + 16, x1);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"10\" text-anchor=\"end\">%.4g</text>\n",
                  ml - 6, mt + 4, y1);
    out << buf;
    out << "</svg>\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace entropylab::io
