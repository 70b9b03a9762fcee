#include "transquad/ordinal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace transquad {

namespace {

double layer_point(const LayerGen& gen, double lo, double hi, std::uint64_t n) {
    switch (gen.kind) {
    case LayerGen::Kind::dyadic: {
        // hi - 2^-n (hi - lo); collapses to hi once 2^-n underflows.
        int e = n > 4096 ? -4096 : -static_cast<int>(n);
        return hi - std::ldexp(hi - lo, e);
    }
    case LayerGen::Kind::arith:
        return lo + gen.step * static_cast<double>(n);
    }
    return lo;
}

// Largest n with point(n) <= t < point(n+1). Requires point(0) <= t < hi.
std::uint64_t layer_locate(const LayerGen& gen, double lo, double hi, double t) {
    std::uint64_t n = 0;
    if (gen.kind == LayerGen::Kind::arith) {
        double est = (t - lo) / gen.step;
        n = est <= 0.0 ? 0 : static_cast<std::uint64_t>(est);
    } else {
        double rel = (hi - lo) / (hi - t);
        if (rel > 1.0 && std::isfinite(rel)) {
            double est = std::floor(std::log2(rel));
            n = est <= 0.0 ? 0 : static_cast<std::uint64_t>(est);
        } else if (!std::isfinite(rel)) {
            n = 4096; // t at fp resolution of hi
        }
    }
    while (n > 0 && layer_point(gen, lo, hi, n) > t) --n;
    while (layer_point(gen, lo, hi, n + 1) <= t) ++n;
    return n;
}

} // namespace

Address::Address(std::vector<std::uint64_t> digits) : digits_(std::move(digits)) {
    if (digits_.empty()) digits_.push_back(0);
    while (digits_.size() > 1 && digits_.back() == 0) digits_.pop_back();
}

std::vector<std::uint64_t> Address::padded(std::size_t depth) const {
    std::vector<std::uint64_t> out = digits_;
    if (out.size() > depth) throw Error("address deeper than set depth");
    out.resize(depth, 0);
    return out;
}

std::strong_ordering Address::operator<=>(const Address& other) const {
    std::size_t n = std::max(digits_.size(), other.digits_.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t a = i < digits_.size() ? digits_[i] : 0;
        std::uint64_t b = i < other.digits_.size() ? other.digits_[i] : 0;
        if (a != b) return a <=> b;
    }
    return std::strong_ordering::equal;
}

bool Address::operator==(const Address& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
}

std::string Address::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i) os << '.';
        os << digits_[i];
    }
    return os.str();
}

Address Address::parse(const std::string& dotted) {
    std::vector<std::uint64_t> d;
    std::istringstream is(dotted);
    std::string part;
    while (std::getline(is, part, '.')) {
        if (part.empty()) throw BadSpec("bad address: " + dotted);
        d.push_back(std::stoull(part));
    }
    if (d.empty()) throw BadSpec("bad address: " + dotted);
    return Address(std::move(d));
}

const Address& Position::address() const {
    if (is_sup_) throw Error("position is the supremum, not an address");
    return addr_;
}

bool Position::operator==(const Position& o) const {
    if (is_sup_ != o.is_sup_) return false;
    return is_sup_ || addr_ == o.addr_;
}

std::strong_ordering Position::operator<=>(const Position& o) const {
    if (is_sup_ && o.is_sup_) return std::strong_ordering::equal;
    if (is_sup_) return std::strong_ordering::greater;
    if (o.is_sup_) return std::strong_ordering::less;
    return addr_ <=> o.addr_;
}

WellOrderedSet WellOrderedSet::dyadic(double min, double sup, std::size_t depth) {
    if (!(min < sup) || !std::isfinite(min) || !std::isfinite(sup))
        throw BadSpec("dyadic set needs finite min < sup");
    if (depth == 0) throw BadSpec("depth must be at least 1");
    WellOrderedSet s;
    s.min_ = min;
    s.sup_ = sup;
    s.layers_.assign(depth, LayerGen{LayerGen::Kind::dyadic, 1.0});
    return s;
}

WellOrderedSet WellOrderedSet::finite_chain(std::vector<double> values) {
    if (values.empty()) throw BadSpec("finite chain needs at least one value");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i - 1] < values[i])) throw BadSpec("finite chain must be strictly increasing");
    WellOrderedSet s;
    s.finite_ = true;
    s.values_ = std::move(values);
    s.min_ = s.values_.front();
    s.sup_ = s.values_.back();
    return s;
}

WellOrderedSet WellOrderedSet::custom(double min, double sup, std::vector<LayerGen> layers) {
    if (layers.empty()) throw BadSpec("custom set needs at least one layer");
    if (!(min < sup)) throw BadSpec("custom set needs min < sup");
    bool inf_sup = std::isinf(sup);
    if (layers[0].kind == LayerGen::Kind::arith) {
        if (!inf_sup) throw BadSpec("arith layer requires sup = inf");
        if (!(layers[0].step > 0)) throw BadSpec("arith step must be positive");
    } else if (inf_sup) {
        throw BadSpec("dyadic top layer requires finite sup");
    }
    for (std::size_t l = 1; l < layers.size(); ++l)
        if (layers[l].kind != LayerGen::Kind::dyadic)
            throw BadSpec("only layer 0 may be arithmetic");
    WellOrderedSet s;
    s.min_ = min;
    s.sup_ = sup;
    s.layers_ = std::move(layers);
    return s;
}

WellOrderedSet WellOrderedSet::from_config(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("kind")) throw BadSpec("set spec needs a kind");
    std::string kind = spec.at("kind").get<std::string>();
    auto read_sup = [&]() -> double {
        const auto& s = spec.at("sup");
        if (s.is_string()) {
            std::string v = s.get<std::string>();
            if (v == "inf" || v == "+inf" || v == "infinity")
                return std::numeric_limits<double>::infinity();
            throw BadSpec("bad sup: " + v);
        }
        return s.get<double>();
    };
    if (kind == "finite") {
        return finite_chain(spec.at("values").get<std::vector<double>>());
    }
    if (kind == "dyadic") {
        std::size_t depth = spec.value("depth", std::size_t{3});
        return dyadic(spec.at("min").get<double>(), read_sup(), depth);
    }
    if (kind == "custom") {
        std::vector<LayerGen> layers;
        for (const auto& l : spec.at("layers")) {
            LayerGen g;
            std::string type = l.at("type").get<std::string>();
            if (type == "dyadic") {
                g.kind = LayerGen::Kind::dyadic;
            } else if (type == "arith") {
                g.kind = LayerGen::Kind::arith;
                g.step = l.value("step", 1.0);
            } else {
                throw BadSpec("unknown layer type: " + type);
            }
            layers.push_back(g);
        }
        return custom(spec.at("min").get<double>(), read_sup(), std::move(layers));
    }
    throw BadSpec("unknown set kind: " + kind);
}

nlohmann::json WellOrderedSet::to_config() const {
    nlohmann::json j;
    if (finite_) {
        j["kind"] = "finite";
        j["values"] = values_;
        return j;
    }
    bool plain_dyadic = true;
    for (const auto& l : layers_)
        if (l.kind != LayerGen::Kind::dyadic) plain_dyadic = false;
    j["min"] = min_;
    if (std::isinf(sup_))
        j["sup"] = "inf";
    else
        j["sup"] = sup_;
    if (plain_dyadic) {
        j["kind"] = "dyadic";
        j["depth"] = layers_.size();
    } else {
        j["kind"] = "custom";
        nlohmann::json layers = nlohmann::json::array();
        for (const auto& l : layers_) {
            if (l.kind == LayerGen::Kind::dyadic)
                layers.push_back({{"type", "dyadic"}});
            else
                layers.push_back({{"type", "arith"}, {"step", l.step}});
        }
        j["layers"] = layers;
    }
    if (cutoff_) j["cutoff"] = cutoff_->str();
    return j;
}

double WellOrderedSet::sup_value() const {
    if (!cutoff_) return sup_;
    if (cutoff_->at_sup()) return sup_;
    const Address& g = cutoff_->address();
    if (g.is_first()) return min_; // empty restriction
    auto digits = g.padded(depth());
    if (is_successor_position(*this, Position(g))) digits.back() -= 1;
    return value_unchecked(digits);
}

bool WellOrderedSet::contains_sup() const {
    if (cutoff_ && !cutoff_->at_sup()) {
        const Address& g = cutoff_->address();
        if (g.is_first()) return false;
        return is_successor_position(*this, Position(g));
    }
    return finite_;
}

void WellOrderedSet::check_address(const Address& a) const {
    if (a.length() > depth()) throw Error("address deeper than set depth: " + a.str());
    if (finite_ && a.digits()[0] >= values_.size())
        throw Error("address beyond finite chain: " + a.str());
    if (cutoff_ && !cutoff_->at_sup() && !(Position(a) < *cutoff_))
        throw Error("address beyond cutoff: " + a.str());
}

double WellOrderedSet::value_unchecked(const std::vector<std::uint64_t>& padded) const {
    if (finite_) return values_[padded[0]];
    double lo = min_, hi = sup_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        double v0 = layer_point(layers_[l], lo, hi, padded[l]);
        if (l + 1 == layers_.size()) return v0;
        double v1 = layer_point(layers_[l], lo, hi, padded[l] + 1);
        lo = v0;
        hi = v1;
    }
    return lo;
}

double WellOrderedSet::value(const Address& a) const {
    check_address(a);
    return value_unchecked(a.padded(depth()));
}

Address WellOrderedSet::successor(const Address& a) const {
    check_address(a);
    auto digits = a.padded(depth());
    if (finite_ && digits[0] + 1 >= values_.size())
        throw AddressAtSup("no successor: element is the chain maximum");
    digits.back() += 1;
    Address s(digits);
    if (cutoff_ && !cutoff_->at_sup() && !(Position(s) < *cutoff_))
        throw AddressAtSup("no successor below the cutoff");
    return s;
}

std::pair<double, double> WellOrderedSet::step_interval(const Address& a) const {
    double lo = value(a);
    double hi = value(successor(a));
    return {lo, hi};
}

double WellOrderedSet::step_width(const Address& a) const {
    check_address(a);
    if (finite_) {
        auto d = a.digits();
        if (d[0] + 1 >= values_.size()) throw AddressAtSup("chain maximum owns no step");
        return values_[d[0] + 1] - values_[d[0]];
    }
    auto digits = a.padded(depth());
    double gap;
    switch (layers_[0].kind) {
    case LayerGen::Kind::arith: gap = layers_[0].step; break;
    case LayerGen::Kind::dyadic:
    default:
        gap = std::ldexp(sup_ - min_,
                         -static_cast<int>(std::min<std::uint64_t>(digits[0], 4000)) - 1);
        break;
    }
    for (std::size_t l = 1; l < layers_.size(); ++l)
        gap = std::ldexp(gap, -static_cast<int>(std::min<std::uint64_t>(digits[l], 4000)) - 1);
    return gap;
}

bool WellOrderedSet::is_limit(const Address& a) const {
    check_address(a);
    if (finite_) return false;
    return !a.is_first() && a.length() < depth();
}

WellOrderedSet WellOrderedSet::restrict_below(const Position& gamma) const {
    WellOrderedSet out = *this;
    if (gamma.at_sup()) return out;
    check_address(gamma.address());
    if (!out.cutoff_ || gamma < *out.cutoff_) out.cutoff_ = gamma;
    return out;
}

std::optional<Address> WellOrderedSet::max_element() const {
    if (cutoff_ && !cutoff_->at_sup()) {
        const Address& g = cutoff_->address();
        if (g.is_first()) return std::nullopt;
        if (!is_successor_position(*this, Position(g))) return std::nullopt;
        auto digits = g.padded(depth());
        digits.back() -= 1;
        return Address(digits);
    }
    if (finite_) return Address({values_.size() - 1});
    return std::nullopt;
}

std::optional<Cursor> WellOrderedSet::first() const {
    Address a = Address::first();
    if (cutoff_ && !cutoff_->at_sup() && !(Position(a) < *cutoff_)) return std::nullopt;
    return Cursor{a, value(a), false};
}

std::optional<Cursor> WellOrderedSet::next(const Cursor& c) const {
    try {
        Address s = successor(c.addr);
        return Cursor{s, value(s), is_limit(s)};
    } catch (const AddressAtSup&) {
        return std::nullopt;
    }
}

std::vector<Cursor> WellOrderedSet::enumerate(std::uint64_t budget) const {
    std::vector<Cursor> out;
    auto c = first();
    while (c && out.size() < budget) {
        out.push_back(*c);
        c = next(*c);
    }
    return out;
}

std::vector<Cursor> WellOrderedSet::enumerate_until(double t_max, std::uint64_t per_layer,
                                                    std::uint64_t total_budget) const {
    std::vector<Cursor> out;
    if (finite_) {
        for (std::size_t i = 0; i < values_.size() && out.size() < total_budget; ++i) {
            if (!(values_[i] < t_max)) break;
            Address a({i});
            if (cutoff_ && !cutoff_->at_sup() && !(Position(a) < *cutoff_)) break;
            out.push_back({a, values_[i], false});
        }
        return out;
    }
    const std::size_t d = depth();
    // Depth-first: a node comes before its refinement children with k >= 1.
    std::function<void(std::vector<std::uint64_t>&)> walk =
        [&](std::vector<std::uint64_t>& digits) {
            if (digits.size() >= d || out.size() >= total_budget) return;
            for (std::uint64_t k = digits.empty() ? 0 : 1; k < per_layer; ++k) {
                if (out.size() >= total_budget) return;
                digits.push_back(k);
                Address a(digits);
                bool ok = true;
                if (cutoff_ && !cutoff_->at_sup() && !(Position(a) < *cutoff_)) ok = false;
                double v = ok ? value(a) : 0.0;
                if (ok && v < t_max) {
                    out.push_back({a, v, is_limit(a)});
                    walk(digits);
                    digits.pop_back();
                } else {
                    digits.pop_back();
                    break;
                }
            }
        };
    std::vector<std::uint64_t> digits;
    walk(digits);
    return out;
}

Address WellOrderedSet::locate(double t) const {
    if (!(t >= min_) || !(t < sup_))
        throw Error("locate: point outside [min, sup)");
    if (finite_) {
        auto it = std::upper_bound(values_.begin(), values_.end(), t);
        std::size_t idx = static_cast<std::size_t>(it - values_.begin());
        if (idx == 0) throw Error("locate: below the chain");
        return Address({idx - 1});
    }
    std::vector<std::uint64_t> digits;
    double lo = min_, hi = sup_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        std::uint64_t n = layer_locate(layers_[l], lo, hi, t);
        digits.push_back(n);
        double v0 = layer_point(layers_[l], lo, hi, n);
        double v1 = layer_point(layers_[l], lo, hi, n + 1);
        lo = v0;
        hi = v1;
    }
    Address a(digits);
    if (cutoff_ && !cutoff_->at_sup() && !(Position(a) < *cutoff_))
        throw Error("locate: point beyond cutoff");
    return a;
}

std::optional<std::uint64_t>
WellOrderedSet::child_count(const std::vector<std::uint64_t>& prefix) const {
    if (finite_ && prefix.empty()) {
        std::uint64_t n = values_.size();
        if (cutoff_ && !cutoff_->at_sup())
            n = std::min<std::uint64_t>(n, cutoff_->address().digits()[0]);
        return n;
    }
    if (cutoff_ && !cutoff_->at_sup()) {
        // Children at or beyond the cutoff do not exist in this restriction.
        const auto cut = cutoff_->address().padded(depth());
        bool on_path = prefix.size() <= cut.size();
        for (std::size_t i = 0; on_path && i < prefix.size(); ++i)
            on_path = prefix[i] == cut[i];
        if (on_path && prefix.size() < cut.size()) {
            std::uint64_t limit = cut[prefix.size()];
            // A nonzero deeper digit keeps the child at this digit alive.
            bool deeper = false;
            for (std::size_t i = prefix.size() + 1; i < cut.size(); ++i)
                deeper = deeper || cut[i] != 0;
            return deeper ? limit + 1 : limit;
        }
    }
    return std::nullopt;
}

bool WellOrderedSet::same_structure(const WellOrderedSet& o) const {
    if (finite_ != o.finite_) return false;
    if (finite_) return values_ == o.values_;
    if (min_ != o.min_ || sup_ != o.sup_ || layers_.size() != o.layers_.size()) return false;
    for (std::size_t i = 0; i < layers_.size(); ++i)
        if (layers_[i].kind != o.layers_[i].kind ||
            (layers_[i].kind == LayerGen::Kind::arith && layers_[i].step != o.layers_[i].step))
            return false;
    return true;
}

bool is_successor_position(const WellOrderedSet& set, const Position& p) {
    if (p.at_sup()) return false;
    const Address& a = p.address();
    if (a.is_first()) return false;
    return a.length() == set.depth();
}

} // namespace transquad
