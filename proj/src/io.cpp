#include "hvdc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hvdc {

namespace {

using nlohmann::json;

std::string area_to_string(SyncArea area) {
    switch (area) {
        case SyncArea::Nordic: return "Nordic";
        case SyncArea::ContinentalEurope: return "ContinentalEurope";
        case SyncArea::Baltic: return "Baltic";
    }
    return "Nordic";
}

SyncArea area_from_string(const std::string& text) {
    if (text == "Nordic") return SyncArea::Nordic;
    if (text == "ContinentalEurope") return SyncArea::ContinentalEurope;
    if (text == "Baltic") return SyncArea::Baltic;
    throw ParseError("unknown synchronous area '" + text + "'");
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) {
        throw ParseError(where + ": field '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) {
        throw ParseError(where + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

NetworkModel network_from_json(const json& doc) {
    NetworkModel network;
    const json& zones = require(doc, "zones", "network");
    if (!zones.is_array() || zones.empty()) {
        throw ParseError("network: 'zones' must be a non-empty array");
    }
    for (std::size_t i = 0; i < zones.size(); ++i) {
        const std::string where = "zones[" + std::to_string(i) + "]";
        Zone z;
        z.id = require_string(zones[i], "id", where);
        z.name = require_string(zones[i], "name", where);
        z.area = area_from_string(require_string(zones[i], "area", where));
        network.zones.push_back(std::move(z));
    }
    const json& lines = require(doc, "interconnectors", "network");
    if (!lines.is_array()) {
        throw ParseError("network: 'interconnectors' must be an array");
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = "interconnectors[" + std::to_string(i) + "]";
        const json& jl = lines[i];
        Interconnector ic;
        ic.id = require_string(jl, "id", where);
        ic.from_zone = require_string(jl, "from", where);
        ic.to_zone = require_string(jl, "to", where);
        const std::string kind = require_string(jl, "kind", where);
        if (kind == "AC") {
            ic.kind = LineKind::AC;
        } else if (kind == "HVDC") {
            ic.kind = LineKind::HVDC;
        } else {
            throw ParseError(where + ": kind must be 'AC' or 'HVDC'");
        }
        ic.atc_forward_mw = require_number(jl, "atc_fwd_mw", where);
        ic.atc_reverse_mw = require_number(jl, "atc_rev_mw", where);
        const json& jloss = require(jl, "loss", where);
        ic.loss.a0_mw = require_number(jloss, "a0_mw", where + ".loss");
        ic.loss.b = require_number(jloss, "b", where + ".loss");
        ic.loss.c_per_mw = require_number(jloss, "c_per_mw", where + ".loss");
        ic.loss.p_max_mw = require_number(jloss, "p_max_mw", where + ".loss");
        if (jl.contains("fixed_flow_mw") && !jl["fixed_flow_mw"].is_null()) {
            ic.fixed_flow_mw = jl["fixed_flow_mw"].get<double>();
        }
        network.interconnectors.push_back(std::move(ic));
    }
    if (doc.contains("overrides")) {
        const json& ovs = doc["overrides"];
        if (!ovs.is_array()) {
            throw ParseError("network: 'overrides' must be an array");
        }
        for (std::size_t i = 0; i < ovs.size(); ++i) {
            const std::string where = "overrides[" + std::to_string(i) + "]";
            const json& jo = ovs[i];
            HourlyOverride ov;
            ov.hour = static_cast<std::size_t>(require_number(jo, "hour", where));
            ov.interconnector = require_string(jo, "interconnector", where);
            if (jo.contains("atc_fwd_mw")) ov.atc_forward_mw = jo["atc_fwd_mw"].get<double>();
            if (jo.contains("atc_rev_mw")) ov.atc_reverse_mw = jo["atc_rev_mw"].get<double>();
            if (jo.contains("fixed_flow_mw")) ov.fixed_flow_mw = jo["fixed_flow_mw"].get<double>();
            network.overrides.push_back(std::move(ov));
        }
    }
    return network;
}

json network_to_json(const NetworkModel& network) {
    json doc;
    doc["zones"] = json::array();
    for (const auto& z : network.zones) {
        doc["zones"].push_back({{"id", z.id}, {"name", z.name}, {"area", area_to_string(z.area)}});
    }
    doc["interconnectors"] = json::array();
    for (const auto& ic : network.interconnectors) {
        json jl = {
            {"id", ic.id},
            {"from", ic.from_zone},
            {"to", ic.to_zone},
            {"kind", ic.kind == LineKind::AC ? "AC" : "HVDC"},
            {"atc_fwd_mw", ic.atc_forward_mw},
            {"atc_rev_mw", ic.atc_reverse_mw},
            {"loss",
             {{"a0_mw", ic.loss.a0_mw},
              {"b", ic.loss.b},
              {"c_per_mw", ic.loss.c_per_mw},
              {"p_max_mw", ic.loss.p_max_mw}}},
        };
        if (ic.fixed_flow_mw) {
            jl["fixed_flow_mw"] = *ic.fixed_flow_mw;
        }
        doc["interconnectors"].push_back(std::move(jl));
    }
    if (!network.overrides.empty()) {
        doc["overrides"] = json::array();
        for (const auto& ov : network.overrides) {
            json jo = {{"hour", ov.hour}, {"interconnector", ov.interconnector}};
            if (ov.atc_forward_mw) jo["atc_fwd_mw"] = *ov.atc_forward_mw;
            if (ov.atc_reverse_mw) jo["atc_rev_mw"] = *ov.atc_reverse_mw;
            if (ov.fixed_flow_mw) jo["fixed_flow_mw"] = *ov.fixed_flow_mw;
            doc["overrides"].push_back(std::move(jo));
        }
    }
    return doc;
}

NetworkModel load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open network file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    NetworkModel network = network_from_json(doc);
    const auto violations = validate(network);
    if (!violations.empty()) {
        std::ostringstream oss;
        oss << path.string() << ": network fails validation:";
        for (const auto& v : violations) {
            oss << "\n  " << v.entity << ": " << v.rule;
        }
        throw ParseError(oss.str());
    }
    return network;
}

void save_network(const NetworkModel& network, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write network file " + path.string());
    }
    out << network_to_json(network).dump(2) << "\n";
}

std::string fmt_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double_field(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError(where + ": not a number: '" + text + "'");
    }
    return v;
}

std::size_t parse_hour_field(const std::string& text, const std::string& where) {
    std::size_t v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ParseError(where + ": not an hour index: '" + text + "'");
    }
    return v;
}

}  // namespace

YearBids load_bids(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open bids file " + path.string());
    }
    YearBids bids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (lineno == 1 && line.rfind("hour,", 0) == 0) {
            continue;  // header
        }
        const std::string where = path.string() + ":" + std::to_string(lineno);
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw ParseError(where + ": expected 5 columns hour,zone,side,price,quantity");
        }
        const std::size_t hour = parse_hour_field(fields[0], where);
        const std::string& zone = fields[1];
        const std::string& side = fields[2];
        const double price = parse_double_field(fields[3], where);
        const double quantity = parse_double_field(fields[4], where);
        if (quantity <= 0.0) {
            throw ParseError(where + ": bid quantities must be strictly positive");
        }
        if (hour >= bids.size()) {
            bids.resize(hour + 1);
        }
        ZoneBids& zb = bids[hour][zone];
        if (side == "supply") {
            zb.supply.steps.push_back({quantity, price});
        } else if (side == "demand") {
            zb.demand.steps.push_back({quantity, price});
        } else {
            throw ParseError(where + ": side must be 'supply' or 'demand'");
        }
    }
    // steps arrive in file order; enforce the curve monotonicity invariants
    for (std::size_t h = 0; h < bids.size(); ++h) {
        for (const auto& [zone, zb] : bids[h]) {
            const std::string entity = "hour " + std::to_string(h) + " zone " + zone;
            auto violations = validate(zb.supply, entity + " supply");
            const auto vd = validate(zb.demand, entity + " demand");
            violations.insert(violations.end(), vd.begin(), vd.end());
            if (!violations.empty()) {
                throw ParseError(path.string() + ": " + violations.front().entity + ": " +
                                 violations.front().rule);
            }
        }
    }
    return bids;
}

void save_bids(const YearBids& bids, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write bids file " + path.string());
    }
    out << "hour,zone,side,price_eur_mwh,quantity_mw\n";
    for (std::size_t h = 0; h < bids.size(); ++h) {
        for (const auto& [zone, zb] : bids[h]) {
            for (const auto& step : zb.supply.steps) {
                out << h << ',' << zone << ",supply," << fmt_double(step.price_eur_mwh) << ','
                    << fmt_double(step.quantity_mw) << '\n';
            }
            for (const auto& step : zb.demand.steps) {
                out << h << ',' << zone << ",demand," << fmt_double(step.price_eur_mwh) << ','
                    << fmt_double(step.quantity_mw) << '\n';
            }
        }
    }
}

HourlySeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open series file " + path.string());
    }
    HourlySeries series;
    bool unit_seen = false;
    std::string line;
    std::size_t lineno = 0;
    std::size_t expected_hour = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (line.rfind("#unit=", 0) == 0) {
            const std::string text = line.substr(6);
            const auto unit = parse_series_unit(text);
            if (!unit) {
                throw ParseError(where + ": unknown unit '" + text + "'");
            }
            series.unit = *unit;
            unit_seen = true;
            continue;
        }
        if (line.rfind("#label=", 0) == 0) {
            series.label = line.substr(7);
            continue;
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line.rfind("hour,", 0) == 0) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw ParseError(where + ": expected 2 columns hour,value");
        }
        const std::size_t hour = parse_hour_field(fields[0], where);
        if (hour != expected_hour) {
            throw ParseError(where + ": hours must be contiguous from 0, got " + fields[0]);
        }
        ++expected_hour;
        series.values.push_back(parse_double_field(fields[1], where));
    }
    if (!unit_seen) {
        throw ParseError(path.string() + ": missing '#unit=' header");
    }
    return series;
}

void save_series(const HourlySeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write series file " + path.string());
    }
    out << "#unit=" << to_string(series.unit) << "\n";
    if (!series.label.empty()) {
        out << "#label=" << series.label << "\n";
    }
    out << "hour,value\n";
    for (std::size_t h = 0; h < series.values.size(); ++h) {
        out << h << ',' << fmt_double(series.values[h]) << '\n';
    }
}

}  // namespace hvdc
