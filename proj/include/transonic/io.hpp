#ifndef TRANSONIC_IO_HPP
#define TRANSONIC_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "transonic/background.hpp"
#include "transonic/errors.hpp"
#include "transonic/fixed_point.hpp"
#include "transonic/norms.hpp"
#include "transonic/radial_basis.hpp"

namespace transonic {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IOError("write failed: " + path);
}

// column-oriented table, emitted as CSV or as whitespace-separated data
struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> cols;

    std::size_t rows() const { return cols.empty() ? 0 : cols[0].size(); }

    std::string to_csv() const {
        std::string s;
        for (std::size_t c = 0; c < headers.size(); ++c)
            s += (c ? "," : "") + headers[c];
        s += "\n";
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t c = 0; c < cols.size(); ++c)
                s += (c ? "," : "") + detail::fmt(cols[c][i]);
            s += "\n";
        }
        return s;
    }

    std::string to_dat() const {
        std::string s = "#";
        for (const std::string& h : headers) s += " " + h;
        s += "\n";
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t c = 0; c < cols.size(); ++c)
                s += (c ? " " : "") + detail::fmt(cols[c][i]);
            s += "\n";
        }
        return s;
    }
};

inline Table background_table(const BackgroundFlow1D& flow) {
    Table t;
    t.headers = {"x1", "u", "rho", "c2", "du", "k11", "k1"};
    t.cols.resize(7);
    for (int i = 0; i < flow.grid.n; ++i) {
        t.cols[0].push_back(flow.grid.x(i));
        t.cols[1].push_back(flow.u[i]);
        t.cols[2].push_back(flow.rho[i]);
        t.cols[3].push_back(flow.c2[i]);
        t.cols[4].push_back(flow.du[i]);
        t.cols[5].push_back(flow.k11[i]);
        t.cols[6].push_back(flow.k1[i]);
    }
    return t;
}

inline Table basis_table(const RadialBasis& B) {
    Table t;
    t.headers = {"r", "w"};
    for (int j = 0; j < B.N; ++j) t.headers.push_back("b" + std::to_string(j + 1));
    t.cols.resize(2 + B.N);
    for (int q = 0; q < B.Q(); ++q) {
        t.cols[0].push_back(B.quad.r[q]);
        t.cols[1].push_back(B.quad.w[q]);
        for (int j = 0; j < B.N; ++j)
            t.cols[2 + j].push_back(B.b[static_cast<std::size_t>(j) * B.Q() + q]);
    }
    return t;
}

// flattened (x1, r) table of the full flow state phi = phi_bar + psi1
inline Table solution_table(const Field2D& psi1, const BackgroundFlow1D& flow) {
    const int M = psi1.M(), Q = psi1.basis->Q();
    if (M != flow.grid.n) throw DimensionMismatch("solution_table: grid mismatch");
    const GradientTables g = gradient_tables(psi1);
    const double gamma = flow.gas.gamma;
    Table t;
    t.headers = {"x1", "r", "u1", "ur", "rho", "mach"};
    t.cols.resize(6);
    for (int i = 0; i < M; ++i) {
        const double x = flow.grid.x(i);
        const double phi_bar = flow.force.integral(flow.gas.L0, x);
        const std::size_t off = static_cast<std::size_t>(i) * Q;
        for (int q = 0; q < Q; ++q) {
            const double u1 = flow.u[i] + g.px[off + q];
            const double ur = g.pr[off + q];
            const double q2 = u1 * u1 + ur * ur;
            const double c2 = (gamma - 1.0) * (flow.B0 + phi_bar - 0.5 * q2);
            if (!(c2 > 0.0)) throw PreconditionViolation("solution_table: vacuum state");
            t.cols[0].push_back(x);
            t.cols[1].push_back(psi1.basis->quad.r[q]);
            t.cols[2].push_back(u1);
            t.cols[3].push_back(ur);
            t.cols[4].push_back(std::pow(c2 / gamma, 1.0 / (gamma - 1.0)));
            t.cols[5].push_back(std::sqrt(q2 / c2));
        }
    }
    return t;
}

inline Table front_table(const SonicFront& f) {
    Table t;
    t.headers = {"r", "xi", "dxi"};
    t.cols = {f.r, f.xi, f.dxi};
    return t;
}

inline Table norms_table(const NormReport& rep) {
    Table t;
    t.headers = {"order", "value"};
    t.cols.resize(2);
    const double vals[5] = {rep.l2r, rep.h1r, rep.h2r, rep.h3r, rep.h4r};
    for (int k = 0; k <= 4; ++k) {
        t.cols[0].push_back(k);
        t.cols[1].push_back(vals[k]);
    }
    return t;
}

inline ordered_json norms_json(const NormReport& rep) {
    ordered_json j;
    j["l2r"] = rep.l2r;
    j["h1r"] = rep.h1r;
    j["h2r"] = rep.h2r;
    j["h3r"] = rep.h3r;
    j["h4r"] = rep.h4r;
    ordered_json comps = ordered_json::object();
    for (const auto& [name, sq] : rep.components) comps[name] = sq;
    j["component_squares"] = comps;
    return j;
}

inline ordered_json certificate_json(const LinearCertificate& cert) {
    ordered_json j;
    j["converged"] = cert.converged;
    j["energy_ratio"] = cert.energy_ratio;
    j["coercivity_margin_min"] = cert.margin_min;
    j["d0"] = cert.d0;
    j["rejected_levels"] = cert.rejected;
    ordered_json levels = ordered_json::array();
    for (const SigmaLevel& lv : cert.levels) {
        ordered_json e;
        e["sigma"] = lv.sigma;
        e["solved"] = lv.solved;
        e["accepted"] = lv.accepted;
        e["energy_ratio"] = lv.energy_ratio;
        e["change"] = lv.change;
        levels.push_back(e);
    }
    j["levels"] = levels;
    return j;
}

inline ordered_json fixed_point_json(const FixedPointReport& rep) {
    ordered_json j;
    j["eps"] = rep.eps;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["delta0"] = rep.delta0;
    j["d0"] = rep.d0;
    j["damping"] = rep.damping_used;
    j["max_contraction_ratio"] = rep.max_ratio;
    j["final_h4r"] = rep.final_h4;
    j["increments"] = rep.increments;
    j["ratios"] = rep.ratios;
    j["compatibilities_ok"] = rep.last_compat.ok;
    j["linear_certificate"] = certificate_json(rep.last_cert);
    return j;
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

// minimal self-contained SVG line plot; one polyline per series
struct PlotSeries {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<double> x, y;
};

inline std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel,
                                 const std::vector<PlotSeries>& series) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const PlotSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                throw IOError("svg_line_plot: non-finite sample in series '" + s.label + "'");
            xmin = std::min(xmin, s.x[i]); xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]); ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin <= xmax)) { xmin = 0.0; xmax = 1.0; }
    if (!(ymin <= ymax)) { ymin = 0.0; ymax = 1.0; }
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(W - mr) +
         "\" y2=\"" + num(H - mb) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(H - mb) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         title + "</text>\n";
    s += "<text x=\"" + num(W / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + "</text>\n";
    s += "<text x=\"16\" y=\"" + num(H / 2) + "\" text-anchor=\"middle\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " + num(H / 2) + ")\">" + ylabel + "</text>\n";
    // corner tick labels
    s += "<text x=\"" + num(ml) + "\" y=\"" + num(H - mb + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + num(xmin) + "</text>\n";
    s += "<text x=\"" + num(W - mr) + "\" y=\"" + num(H - mb + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + num(xmax) + "</text>\n";
    s += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(H - mb + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + num(ymin) + "</text>\n";
    s += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(mt + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + num(ymax) + "</text>\n";
    int li = 0;
    for (const PlotSeries& sr : series) {
        s += "<polyline fill=\"none\" stroke=\"" + sr.color + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < sr.x.size(); ++i) {
            if (i) s += " ";
            s += num(px(sr.x[i])) + "," + num(py(sr.y[i]));
        }
        s += "\"/>\n";
        if (!sr.label.empty()) {
            const double ly = mt + 16 + 16 * li++;
            s += "<line x1=\"" + num(W - mr - 120) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
                 num(W - mr - 100) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + sr.color +
                 "\" stroke-width=\"1.5\"/>\n";
            s += "<text x=\"" + num(W - mr - 94) + "\" y=\"" + num(ly) +
                 "\" font-size=\"12\">" + sr.label + "</text>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

// write one logical table in every requested format
inline void emit_table(const std::filesystem::path& dir, const std::string& stem,
                       const Table& t, const std::vector<std::string>& formats) {
    for (const std::string& f : formats) {
        if (f == "csv") write_text_file((dir / (stem + ".csv")).string(), t.to_csv());
        if (f == "dat") write_text_file((dir / (stem + ".dat")).string(), t.to_dat());
    }
}

inline bool wants(const std::vector<std::string>& formats, const std::string& f) {
    for (const std::string& g : formats)
        if (g == f) return true;
    return false;
}

} // namespace transonic

#endif
