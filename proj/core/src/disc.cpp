#include "pluri/disc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace pluri {

AnalyticDisc AnalyticDisc::constant(const Point& center) {
    AnalyticDisc f;
    f.center = center;
    f.degree = 0;
    return f;
}

Point eval_disc(const AnalyticDisc& f, complexd z) {
    if (std::abs(z) > 1.0 + 1e-12) throw std::domain_error("eval_disc: |z| > 1");
    Point out = f.center;
    for (int j = 0; j < f.dim(); ++j) {
        const auto& c = f.coeffs[j];
        if (static_cast<int>(c.size()) != f.degree)
            throw std::invalid_argument("eval_disc: coefficient table does not match degree");
        complexd acc = 0.0;
        for (int k = f.degree - 1; k >= 0; --k) acc = acc * z + c[k];
        out.z[j] += z * acc;  // exact center at z = 0
    }
    return out;
}

std::string disc_to_json(const AnalyticDisc& f) {
    nlohmann::json j;
    j["degree"] = f.degree;
    nlohmann::json center = nlohmann::json::array();
    for (int i = 0; i < f.dim(); ++i)
        center.push_back({f.center.z[i].real(), f.center.z[i].imag()});
    j["center"] = center;
    nlohmann::json coeffs = nlohmann::json::array();
    for (int i = 0; i < f.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (const complexd& c : f.coeffs[i]) row.push_back({c.real(), c.imag()});
        coeffs.push_back(row);
    }
    j["coeffs"] = coeffs;
    return j.dump();
}

AnalyticDisc disc_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    AnalyticDisc f;
    const auto& center = j.at("center");
    f.center.n = static_cast<int>(center.size());
    if (f.center.n < 1 || f.center.n > 2) throw std::invalid_argument("disc_from_json: bad dimension");
    for (int i = 0; i < f.center.n; ++i)
        f.center.z[i] = complexd(center[i][0].get<double>(), center[i][1].get<double>());
    f.degree = j.at("degree").get<int>();
    const auto& coeffs = j.at("coeffs");
    for (int i = 0; i < f.center.n; ++i) {
        for (const auto& c : coeffs.at(i))
            f.coeffs[i].push_back(complexd(c[0].get<double>(), c[1].get<double>()));
        if (static_cast<int>(f.coeffs[i].size()) != f.degree)
            throw std::invalid_argument("disc_from_json: coefficient row does not match degree");
    }
    return f;
}

CircleQuadrature::CircleQuadrature(int node_count) {
    if (node_count < 256 || (node_count & (node_count - 1)) != 0)
        throw std::invalid_argument("CircleQuadrature: node count must be a power of two >= 256");
    nodes_.reserve(node_count);
    for (int k = 0; k < node_count; ++k)
        nodes_.push_back(std::polar(1.0, 2.0 * M_PI * k / node_count));
}

DiscClass classify(const AnalyticDisc& f, const PiecewiseObjective& obj, int probe) {
    if (probe < 1024) throw std::invalid_argument("classify: probe count must be >= 1024");
    constexpr int kCircles = 20;  // r = 1, 0.95, ..., 0.05 plus the center
    const int per_circle = std::max(8, probe / kCircles);

    double range_margin = std::numeric_limits<double>::infinity();
    range_margin = std::min(range_margin, obj.X().signed_margin(f.center));
    for (int c = 0; c < kCircles; ++c) {
        const double r = 1.0 - 0.05 * c;
        for (int a = 0; a < per_circle; ++a) {
            const complexd z = std::polar(r, 2.0 * M_PI * a / per_circle);
            range_margin = std::min(range_margin, obj.X().signed_margin(eval_disc(f, z)));
        }
    }

    double margin_w = std::numeric_limits<double>::infinity();
    double margin_outer = std::numeric_limits<double>::infinity();
    for (int a = 0; a < probe; ++a) {
        const Point p = eval_disc(f, std::polar(1.0, 2.0 * M_PI * a / probe));
        margin_w = std::min(margin_w, obj.W().signed_margin(p));
        margin_outer = std::min(margin_outer, obj.outer().signed_margin(p));
    }

    DiscClass out;
    out.range_margin = range_margin;
    out.margin_w = margin_w;
    out.margin_outer = margin_outer;
    if (range_margin < kFeasibilityMargin)
        out.label = DiscLabel::Infeasible;
    else if (margin_w >= kFeasibilityMargin)
        out.label = DiscLabel::B1;
    else if (margin_outer >= kFeasibilityMargin)
        out.label = DiscLabel::B2;
    else
        out.label = DiscLabel::GeneralFeasible;
    return out;
}

double poisson_mean(const AnalyticDisc& f, const PiecewiseObjective& obj,
                    const CircleQuadrature& q) {
    // Light feasibility probe over interior circles; T nodes are checked exactly.
    for (double r : {0.25, 0.5, 0.75, 0.9, 0.98}) {
        for (int a = 0; a < 64; ++a) {
            const Point p = eval_disc(f, std::polar(r, 2.0 * M_PI * a / 64));
            if (obj.X().signed_margin(p) < kFeasibilityMargin)
                throw std::domain_error("poisson_mean: infeasible disc (interior leaves X)");
        }
    }
    double sum = 0.0;
    for (const complexd& z : q.nodes()) {
        const Point p = eval_disc(f, z);
        if (!obj.X().contains(p))
            throw std::domain_error("poisson_mean: quadrature node outside X");
        const double v = obj.eval_phi(p);
        if (std::isinf(v)) return v;  // -inf absorbs
        sum += v;
    }
    return sum * q.weight();
}

double boundary_measure(const AnalyticDisc& f, const Domain& target, const CircleQuadrature& q) {
    int hits = 0;
    for (const complexd& z : q.nodes())
        if (target.contains(eval_disc(f, z))) ++hits;
    return static_cast<double>(hits) / q.size();
}

const char* to_string(DiscLabel label) {
    switch (label) {
        case DiscLabel::B1: return "B1";
        case DiscLabel::B2: return "B2";
        case DiscLabel::GeneralFeasible: return "GeneralFeasible";
        case DiscLabel::Infeasible: return "Infeasible";
    }
    return "?";
}

}  // namespace pluri
