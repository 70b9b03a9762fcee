#include "transquad/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace transquad {

namespace {

void require_same(const VectorValue& x, const VectorValue& y) {
    if (x.kind() != y.kind())
        throw SpaceMismatch(std::string("mixed spaces: ") + space_kind_name(x.kind()) +
                            " vs " + space_kind_name(y.kind()));
    if (x.kind() == SpaceKind::real_vec && x.dim() != y.dim())
        throw SpaceMismatch("vector dimensions differ");
}

// Align two c0 prefixes: truncate to the shorter one and fold the dropped
// coordinates into the effective tail bound.
struct AlignedC0 {
    std::size_t len;
    double tail_x;
    double tail_y;
};

AlignedC0 align_c0(const VectorValue& x, const VectorValue& y) {
    std::size_t len = std::min(x.dim(), y.dim());
    auto eff = [&](const VectorValue& v) {
        double t = v.tail_bound();
        for (std::size_t i = len; i < v.dim(); ++i) t = std::max(t, std::abs(v.coords()[i]));
        return t;
    };
    return {len, eff(x), eff(y)};
}

} // namespace

const char* space_kind_name(SpaceKind k) {
    switch (k) {
    case SpaceKind::real: return "real";
    case SpaceKind::real_vec: return "real_vec";
    case SpaceKind::trunc_c0: return "trunc_c0";
    }
    return "?";
}

VectorValue VectorValue::vec(std::vector<double> coords) {
    if (coords.empty()) throw Error("real_vec needs at least one coordinate");
    return VectorValue(SpaceKind::real_vec, std::move(coords), 0.0);
}

VectorValue VectorValue::c0(std::vector<double> prefix, double tail_bound) {
    if (prefix.empty()) throw Error("trunc_c0 needs a nonempty prefix");
    if (!(tail_bound >= 0.0)) throw Error("tail bound must be nonnegative");
    return VectorValue(SpaceKind::trunc_c0, std::move(prefix), tail_bound);
}

VectorValue VectorValue::zero(SpaceKind kind, std::size_t dim) {
    switch (kind) {
    case SpaceKind::real: return real(0.0);
    case SpaceKind::real_vec: return vec(std::vector<double>(std::max<std::size_t>(dim, 1), 0.0));
    case SpaceKind::trunc_c0:
        return c0(std::vector<double>(std::max<std::size_t>(dim, 1), 0.0), 0.0);
    }
    return real(0.0);
}

double VectorValue::scalar() const {
    if (kind_ != SpaceKind::real) throw SpaceMismatch("scalar() on a non-real value");
    return coords_[0];
}

VectorValue VectorValue::with_tail(double tail) const {
    if (kind_ != SpaceKind::trunc_c0) throw SpaceMismatch("tail bound only applies to trunc_c0");
    return VectorValue(kind_, coords_, std::max(tail_, tail));
}

VectorValue add(const VectorValue& x, const VectorValue& y) {
    require_same(x, y);
    if (x.kind() == SpaceKind::trunc_c0) {
        auto a = align_c0(x, y);
        std::vector<double> c(a.len);
        for (std::size_t i = 0; i < a.len; ++i) c[i] = x.coords()[i] + y.coords()[i];
        return VectorValue::c0(std::move(c), a.tail_x + a.tail_y);
    }
    std::vector<double> c(x.dim());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coords()[i] + y.coords()[i];
    return x.kind() == SpaceKind::real ? VectorValue::real(c[0]) : VectorValue::vec(std::move(c));
}

VectorValue sub(const VectorValue& x, const VectorValue& y) {
    return add(x, scale(-1.0, y));
}

VectorValue scale(double s, const VectorValue& x) {
    std::vector<double> c(x.dim());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = s * x.coords()[i];
    switch (x.kind()) {
    case SpaceKind::real: return VectorValue::real(c[0]);
    case SpaceKind::real_vec: return VectorValue::vec(std::move(c));
    case SpaceKind::trunc_c0: return VectorValue::c0(std::move(c), std::abs(s) * x.tail_bound());
    }
    return x;
}

NormInterval norm(const VectorValue& x) {
    double m = 0.0;
    for (double v : x.coords()) m = std::max(m, std::abs(v));
    if (x.kind() == SpaceKind::trunc_c0) return {m, std::max(m, x.tail_bound())};
    return {m, m};
}

Tri leq(const VectorValue& x, const VectorValue& y, double slack) {
    require_same(x, y);
    if (x.kind() != SpaceKind::trunc_c0) {
        for (std::size_t i = 0; i < x.dim(); ++i)
            if (!(x.coords()[i] <= y.coords()[i] + slack)) return Tri::no;
        return Tri::yes;
    }
    auto a = align_c0(x, y);
    bool tracked_ok = true;
    for (std::size_t i = 0; i < a.len; ++i)
        if (!(x.coords()[i] <= y.coords()[i] + slack)) tracked_ok = false;
    if (!tracked_ok) return Tri::no;
    // Beyond the prefix the coordinates are only known within the tail bounds.
    if (a.tail_x + a.tail_y <= slack) return Tri::yes;
    return Tri::unknown;
}

double sup_diff_tracked(const VectorValue& x, const VectorValue& y) {
    require_same(x, y);
    std::size_t len = std::min(x.dim(), y.dim());
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i)
        m = std::max(m, std::abs(x.coords()[i] - y.coords()[i]));
    return m;
}

VectorValue component_min(const VectorValue& x, const VectorValue& y) {
    require_same(x, y);
    std::size_t len = std::min(x.dim(), y.dim());
    std::vector<double> c(len);
    for (std::size_t i = 0; i < len; ++i) c[i] = std::min(x.coords()[i], y.coords()[i]);
    if (x.kind() == SpaceKind::trunc_c0)
        return VectorValue::c0(std::move(c), std::max(x.tail_bound(), y.tail_bound()));
    return x.kind() == SpaceKind::real ? VectorValue::real(c[0]) : VectorValue::vec(std::move(c));
}

VectorValue component_max(const VectorValue& x, const VectorValue& y) {
    require_same(x, y);
    std::size_t len = std::min(x.dim(), y.dim());
    std::vector<double> c(len);
    for (std::size_t i = 0; i < len; ++i) c[i] = std::max(x.coords()[i], y.coords()[i]);
    if (x.kind() == SpaceKind::trunc_c0)
        return VectorValue::c0(std::move(c), std::max(x.tail_bound(), y.tail_bound()));
    return x.kind() == SpaceKind::real ? VectorValue::real(c[0]) : VectorValue::vec(std::move(c));
}

nlohmann::json VectorValue::to_json() const {
    nlohmann::json j;
    j["kind"] = space_kind_name(kind_);
    j["coords"] = coords_;
    if (kind_ == SpaceKind::trunc_c0) j["tail_bound"] = tail_;
    return j;
}

VectorValue VectorValue::from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    auto coords = j.at("coords").get<std::vector<double>>();
    if (kind == "real") {
        if (coords.size() != 1) throw BadSpec("real value needs exactly one coordinate");
        return real(coords[0]);
    }
    if (kind == "real_vec") return vec(std::move(coords));
    if (kind == "trunc_c0") return c0(std::move(coords), j.value("tail_bound", 0.0));
    throw BadSpec("unknown space kind: " + kind);
}

std::string VectorValue::str() const {
    std::ostringstream os;
    os << space_kind_name(kind_) << "[";
    for (std::size_t i = 0; i < coords_.size() && i < 8; ++i) {
        if (i) os << ",";
        os << coords_[i];
    }
    if (coords_.size() > 8) os << ",...";
    os << "]";
    if (kind_ == SpaceKind::trunc_c0) os << "+/-" << tail_;
    return os.str();
}

} // namespace transquad
