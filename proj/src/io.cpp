#include "bonusrank/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace bonusrank {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    std::size_t b = text.find_first_not_of(" \t\r");
    std::size_t e = text.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw InputError("empty numeric field");
    const char* first = text.data() + b;
    const char* last = text.data() + e + 1;
    if (*first == '+') ++first;
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw InputError("not a number: '" + text + "'");
    return v;
}

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw InputError("unterminated quote in CSV line");
    out.push_back(cur);
    return out;
}

static std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

static std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("dataset CSV is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    auto header = split_csv_line(line);
    for (auto& h : header) h = strip(h);
    if (header.size() < 2 || header[0] != "id") throw InputError("dataset CSV header must start with 'id'");
    bool has_group = header.back() == "group";
    std::size_t d = header.size() - 1 - (has_group ? 1 : 0);
    if (d == 0) throw InputError("dataset CSV has no attribute columns");
    std::vector<std::string> names(header.begin() + 1, header.begin() + 1 + d);

    std::vector<std::string> ids;
    std::vector<double> vals;
    std::vector<std::string> groups;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw InputError("dataset CSV line " + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
        ids.push_back(strip(f[0]));
        for (std::size_t j = 0; j < d; ++j) {
            try {
                vals.push_back(parse_double(f[1 + j]));
            } catch (const InputError& e) {
                throw InputError("dataset CSV line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (has_group) {
            std::string g = strip(f.back());
            groups.push_back(g.empty() ? "none" : g);
        }
    }
    std::optional<std::vector<std::string>> planted;
    if (has_group) planted = std::move(groups);
    try {
        return Dataset(std::move(ids), std::move(vals), d, std::move(names), std::move(planted));
    } catch (const ContractError& e) {
        throw InputError(std::string("dataset CSV: ") + e.what());
    }
}

static std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    return f;
}

static std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    return f;
}

Dataset read_dataset_csv_file(const std::string& path) {
    auto f = open_in(path);
    return read_dataset_csv(f);
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
    out << "id";
    for (const auto& a : ds.attr_names()) out << ',' << csv_field(a);
    if (ds.planted()) out << ",group";
    out << '\n';
    for (std::size_t i = 0; i < ds.n(); ++i) {
        out << csv_field(ds.id(i));
        for (std::size_t j = 0; j < ds.d(); ++j) out << ',' << format_double(ds.value(i, j));
        if (ds.planted()) out << ',' << csv_field((*ds.planted())[i]);
        out << '\n';
    }
}

void write_dataset_csv_file(const std::string& path, const Dataset& ds) {
    auto f = open_out(path);
    write_dataset_csv(f, ds);
}

Ranking read_ranking(std::istream& in) {
    Ranking r;
    std::string line;
    while (std::getline(in, line)) {
        std::string s = strip(line);
        if (!s.empty() && s.back() == '\r') s.pop_back();
        if (s.empty() || s[0] == '#') continue;
        r.order.push_back(s);
    }
    if (r.order.empty()) throw InputError("ranking file is empty");
    return r;
}

Ranking read_ranking_file(const std::string& path) {
    auto f = open_in(path);
    return read_ranking(f);
}

void write_ranking(std::ostream& out, const Ranking& r) {
    for (const auto& id : r.order) out << id << '\n';
}

void write_ranking_file(const std::string& path, const Ranking& r) {
    auto f = open_out(path);
    write_ranking(f, r);
}

std::string explanation_to_json(const Explanation& e, int indent) {
    json j;
    j["weights"] = e.weights;
    j["groups"] = json::array();
    for (const auto& g : e.groups) j["groups"].push_back({{"members", g.members}, {"bonus", g.bonus}});
    if (e.regime.strict)
        j["regime"] = {{"type", "strict"}, {"epsilon", e.regime.epsilon}};
    else
        j["regime"] = {{"type", "non-strict"}};
    json params = json::object();
    for (const auto& [k, v] : e.provenance.params) params[k] = v;
    j["provenance"] = {{"solver", e.provenance.solver}, {"params", params}};
    return j.dump(indent);
}

Explanation explanation_from_json(const std::string& text) {
    Explanation e;
    try {
        json j = json::parse(text);
        for (const auto& w : j.at("weights")) e.weights.push_back(w.get<double>());
        for (const auto& g : j.at("groups")) {
            Group gr;
            gr.members = g.at("members").get<std::vector<std::string>>();
            gr.bonus = g.at("bonus").get<double>();
            e.groups.push_back(std::move(gr));
        }
        if (j.contains("regime")) {
            const auto& r = j["regime"];
            std::string type = r.value("type", "non-strict");
            if (type == "strict")
                e.regime = {true, r.at("epsilon").get<double>()};
            else if (type != "non-strict")
                throw InputError("unknown regime type '" + type + "'");
        }
        if (j.contains("provenance")) {
            const auto& p = j["provenance"];
            e.provenance.solver = p.value("solver", "");
            if (p.contains("params"))
                for (auto it = p["params"].begin(); it != p["params"].end(); ++it)
                    e.provenance.params.emplace_back(it.key(),
                                                     it->is_string() ? it->get<std::string>() : it->dump());
        }
    } catch (const json::exception& ex) {
        throw InputError(std::string("explanation JSON: ") + ex.what());
    }
    if (e.regime.strict && !(e.regime.epsilon > 0)) throw InputError("explanation JSON: strict epsilon must be > 0");
    return e;
}

Explanation read_explanation_file(const std::string& path) {
    auto f = open_in(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return explanation_from_json(ss.str());
}

void write_explanation_file(const std::string& path, const Explanation& e) {
    auto f = open_out(path);
    f << explanation_to_json(e) << '\n';
}

}  // namespace bonusrank
