#include "mkv/models/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mkv/errors.hpp"

namespace mkv::models {

schedule schedule::constant(double value) {
    if (!std::isfinite(value)) throw domain_error("schedule value must be finite");
    schedule s;
    s.t_ = {0.0};
    s.v_ = {value};
    return s;
}

schedule schedule::from_knots(std::vector<double> t, std::vector<double> values) {
    if (t.empty() || t.size() != values.size()) throw shape_error("schedule needs matching, non-empty knots");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(values[i])) throw domain_error("schedule knots must be finite");
        if (i > 0 && !(t[i] > t[i - 1])) throw domain_error("schedule knot times must be strictly increasing");
    }
    schedule s;
    s.t_ = std::move(t);
    s.v_ = std::move(values);
    return s;
}

schedule schedule::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open schedule file " + path);
    std::vector<double> t, v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a >> b)) {
            if (t.empty() && lineno == 1) continue;  // header
            throw domain_error(path + ":" + std::to_string(lineno) + ": expected two numbers");
        }
        t.push_back(a);
        v.push_back(b);
    }
    return from_knots(std::move(t), std::move(v));
}

schedule schedule::from_ode_path(const std::vector<ode_point>& path, std::size_t component) {
    std::vector<std::pair<double, double>> kv;
    kv.reserve(path.size());
    for (const auto& p : path) {
        if (component >= p.y.size()) throw shape_error("ODE component out of range");
        kv.emplace_back(p.t, p.y[component]);
    }
    std::sort(kv.begin(), kv.end());
    std::vector<double> t, v;
    for (const auto& [a, b] : kv) {
        t.push_back(a);
        v.push_back(b);
    }
    return from_knots(std::move(t), std::move(v));
}

double schedule::operator()(double t) const {
    if (t <= t_.front()) return v_.front();
    if (t >= t_.back()) return v_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - t_.begin());
    const double w = (t - t_[j - 1]) / (t_[j] - t_[j - 1]);
    return v_[j - 1] + w * (v_[j] - v_[j - 1]);
}

}  // namespace mkv::models
