#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bonusrank/io.hpp"
#include "bonusrank/milp.hpp"

namespace bonusrank {

namespace {

using json = nlohmann::ordered_json;

std::string meta_json(const MilpMeta& m) {
    json j;
    j["encoding"] = m.encoding;
    j["n"] = m.n;
    j["d"] = m.d;
    j["g"] = m.g;
    j["k"] = m.k;
    j["epsilon"] = m.epsilon;
    j["big_m"] = m.big_m;
    j["weight_box"] = m.weight_box;
    j["pi"] = m.pi;
    return j.dump();
}

MilpMeta meta_from_json(const std::string& text) {
    MilpMeta m;
    try {
        auto j = json::parse(text);
        m.encoding = j.at("encoding").get<std::string>();
        m.n = j.at("n").get<std::size_t>();
        m.d = j.at("d").get<std::size_t>();
        m.g = j.at("g").get<std::size_t>();
        m.k = j.at("k").get<std::size_t>();
        m.epsilon = j.at("epsilon").get<double>();
        m.big_m = j.at("big_m").get<double>();
        m.weight_box = j.at("weight_box").get<double>();
        m.pi = j.at("pi").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw InputError(std::string("model metadata: ") + e.what());
    }
    return m;
}

std::string bound_text(double x) {
    if (x == kInf) return "+inf";
    if (x == -kInf) return "-inf";
    return format_double(x);
}

void write_terms(std::ostream& o, const MilpModel& m, const std::vector<std::pair<std::size_t, double>>& terms) {
    for (auto [j, a] : terms) {
        o << (a < 0 ? " - " : " + ") << format_double(std::abs(a)) << ' ' << m.vars[j].name;
    }
}

const char* rel_text(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        case Relation::Equal: return "=";
    }
    return "?";
}

std::string export_lp(const MilpModel& m) {
    std::ostringstream o;
    o << "\\ bonusrank model\n";
    o << "\\ meta " << meta_json(m.meta) << "\n";
    o << (m.sense == Sense::Minimize ? "Minimize" : "Maximize") << "\n obj:";
    if (m.objective.empty() && !m.vars.empty())
        o << " 0 " << m.vars[0].name;
    else
        write_terms(o, m, m.objective);
    o << "\nSubject To\n";
    for (const auto& c : m.cons) {
        o << ' ' << c.name << ':';
        if (c.terms.empty() && !m.vars.empty()) o << " 0 " << m.vars[0].name;
        write_terms(o, m, c.terms);
        o << ' ' << rel_text(c.rel) << ' ' << format_double(c.rhs) << '\n';
    }
    o << "Bounds\n";
    for (const auto& v : m.vars) o << ' ' << bound_text(v.lo) << " <= " << v.name << " <= " << bound_text(v.hi) << '\n';
    std::vector<std::string> bins, gens;
    for (const auto& v : m.vars)
        if (v.integer) (v.lo == 0.0 && v.hi == 1.0 ? bins : gens).push_back(v.name);
    if (!gens.empty()) {
        o << "Generals\n";
        for (const auto& s : gens) o << ' ' << s << '\n';
    }
    if (!bins.empty()) {
        o << "Binaries\n";
        for (const auto& s : bins) o << ' ' << s << '\n';
    }
    o << "End\n";
    return o.str();
}

std::string export_mps(const MilpModel& m) {
    std::ostringstream o;
    o << "* bonusrank model\n";
    o << "* meta " << meta_json(m.meta) << "\n";
    o << "NAME bonusrank\n";
    o << "OBJSENSE\n    " << (m.sense == Sense::Minimize ? "MIN" : "MAX") << "\n";
    o << "ROWS\n N obj\n";
    for (const auto& c : m.cons)
        o << ' ' << (c.rel == Relation::LessEq ? 'L' : c.rel == Relation::GreaterEq ? 'G' : 'E') << ' ' << c.name << '\n';
    std::vector<std::vector<std::pair<std::string, double>>> cols(m.vars.size());
    for (auto [j, a] : m.objective) cols[j].emplace_back("obj", a);
    for (const auto& c : m.cons)
        for (auto [j, a] : c.terms) cols[j].emplace_back(c.name, a);
    o << "COLUMNS\n";
    bool in_int = false;
    std::size_t marker = 0;
    for (std::size_t j = 0; j < m.vars.size(); ++j) {
        if (m.vars[j].integer != in_int) {
            o << "    MARKER" << marker++ << " 'MARKER' " << (in_int ? "'INTEND'" : "'INTORG'") << '\n';
            in_int = m.vars[j].integer;
        }
        if (cols[j].empty()) o << "    " << m.vars[j].name << " obj 0\n";
        for (const auto& [row, a] : cols[j]) o << "    " << m.vars[j].name << ' ' << row << ' ' << format_double(a) << '\n';
    }
    if (in_int) o << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
    o << "RHS\n";
    for (const auto& c : m.cons)
        if (c.rhs != 0.0) o << "    RHS " << c.name << ' ' << format_double(c.rhs) << '\n';
    o << "BOUNDS\n";
    for (const auto& v : m.vars) {
        const std::string& s = v.name;
        if (v.integer && v.lo == 0.0 && v.hi == 1.0) {
            o << " BV BND " << s << '\n';
        } else if (v.lo == -kInf && v.hi == kInf) {
            o << " FR BND " << s << '\n';
        } else if (v.lo == v.hi) {
            o << " FX BND " << s << ' ' << format_double(v.lo) << '\n';
        } else {
            if (v.lo == -kInf)
                o << " MI BND " << s << '\n';
            else if (v.lo != 0.0)
                o << " LO BND " << s << ' ' << format_double(v.lo) << '\n';
            if (v.hi != kInf)
                o << " UP BND " << s << ' ' << format_double(v.hi) << '\n';
            else if (v.integer)
                o << " PL BND " << s << '\n';
        }
    }
    o << "ENDATA\n";
    return o.str();
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_number(const std::string& s) {
    try {
        parse_double(s);
        return true;
    } catch (const InputError&) {
        return false;
    }
}

struct RawRow {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

// Terms like "+ 2 x - y 3 z"; coefficient and sign tokens may also be glued ("-2", "+x" is not supported).
std::vector<std::pair<std::string, double>> parse_terms(const std::vector<std::string>& tk) {
    std::vector<std::pair<std::string, double>> out;
    double sign = 1.0;
    std::optional<double> coef;
    for (const auto& t : tk) {
        if (t == "+") continue;
        if (t == "-") {
            sign = -sign;
            continue;
        }
        if (is_number(t)) {
            if (coef) throw InputError("LP: two coefficients in a row near '" + t + "'");
            coef = parse_double(t);
            continue;
        }
        out.emplace_back(t, sign * coef.value_or(1.0));
        sign = 1.0;
        coef.reset();
    }
    if (coef || sign != 1.0) throw InputError("LP: dangling coefficient or sign");
    return out;
}

struct Builder {
    MilpModel m;
    std::map<std::string, std::pair<double, double>> bounds;
    std::vector<std::string> order;
    std::map<std::string, bool> integer;
    std::map<std::string, bool> seen;

    void mention(const std::string& name) {
        if (!seen[name]) {
            seen[name] = true;
            order.push_back(name);
        }
    }
    MilpModel finish(const std::vector<std::pair<std::string, double>>& objective, const std::vector<RawRow>& rows) {
        try {
            for (const auto& name : order) {
                auto b = bounds.count(name) ? bounds[name] : std::pair<double, double>{0.0, kInf};
                m.add_var(name, b.first, b.second, integer[name]);
            }
            for (const auto& [name, a] : objective) m.objective.emplace_back(m.var(name), a);
            std::sort(m.objective.begin(), m.objective.end());
            std::erase_if(m.objective, [](const auto& t) { return t.second == 0.0; });
            for (const auto& r : rows) {
                std::vector<std::pair<std::size_t, double>> t;
                for (const auto& [name, a] : r.terms) t.emplace_back(m.var(name), a);
                m.add_constraint(r.name, std::move(t), r.rel, r.rhs);
            }
        } catch (const ContractError& e) {
            throw InputError(std::string("model text: ") + e.what());
        }
        return std::move(m);
    }
};

MilpModel parse_lp(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    enum class Sec { None, Obj, Cons, Bounds, Gen, Bin, End } sec = Sec::None;
    Builder B;
    std::vector<std::string> obj_tokens;
    std::vector<RawRow> rows;
    std::vector<std::string> pending;  // constraint tokens spanning lines
    std::vector<std::string> bound_lines, gen_names, bin_names;

    auto flush_constraint = [&]() {
        if (pending.empty()) return;
        auto it = std::find_if(pending.begin(), pending.end(),
                               [](const std::string& t) { return t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>"; });
        if (it == pending.end() || it + 1 == pending.end()) return;  // rhs still to come
        RawRow r;
        std::vector<std::string> lhs(pending.begin(), it);
        if (!lhs.empty() && lhs[0].back() == ':') {
            r.name = lhs[0].substr(0, lhs[0].size() - 1);
            lhs.erase(lhs.begin());
        } else {
            r.name = "R" + std::to_string(rows.size() + 1);
        }
        r.terms = parse_terms(lhs);
        r.rel = (*it == "<=" || *it == "=<") ? Relation::LessEq : (*it == "=") ? Relation::Equal : Relation::GreaterEq;
        if (it + 2 != pending.end()) throw InputError("LP: junk after rhs in constraint " + r.name);
        r.rhs = parse_double(*(it + 1));
        rows.push_back(std::move(r));
        pending.clear();
    };

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tk = tokens(line);
        if (tk.empty()) continue;
        if (tk[0][0] == '\\') {
            const std::string tag = "\\ meta ";
            if (line.rfind(tag, 0) == 0) B.m.meta = meta_from_json(line.substr(tag.size()));
            continue;
        }
        std::string head = lower(line.substr(line.find_first_not_of(" \t")));
        while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.pop_back();
        if (head == "minimize" || head == "minimum" || head == "min") {
            B.m.sense = Sense::Minimize;
            sec = Sec::Obj;
            continue;
        }
        if (head == "maximize" || head == "maximum" || head == "max") {
            B.m.sense = Sense::Maximize;
            sec = Sec::Obj;
            continue;
        }
        if (head == "subject to" || head == "such that" || head == "st" || head == "s.t.") {
            sec = Sec::Cons;
            continue;
        }
        if (head == "bounds" || head == "bound") {
            if (!pending.empty()) throw InputError("LP: unterminated constraint");
            sec = Sec::Bounds;
            continue;
        }
        if (head == "generals" || head == "general" || head == "gen") {
            sec = Sec::Gen;
            continue;
        }
        if (head == "binaries" || head == "binary" || head == "bin") {
            sec = Sec::Bin;
            continue;
        }
        if (head == "end") {
            sec = Sec::End;
            continue;
        }
        switch (sec) {
            case Sec::Obj: obj_tokens.insert(obj_tokens.end(), tk.begin(), tk.end()); break;
            case Sec::Cons:
                pending.insert(pending.end(), tk.begin(), tk.end());
                flush_constraint();
                break;
            case Sec::Bounds: bound_lines.push_back(line); break;
            case Sec::Gen: gen_names.insert(gen_names.end(), tk.begin(), tk.end()); break;
            case Sec::Bin: bin_names.insert(bin_names.end(), tk.begin(), tk.end()); break;
            case Sec::None:
            case Sec::End: throw InputError("LP: text outside any section: " + line);
        }
    }
    if (!pending.empty()) throw InputError("LP: unterminated constraint");

    // declaration order: Bounds first, then first mention anywhere else
    for (const auto& bl : bound_lines) {
        auto tk = tokens(bl);
        auto num = [](const std::string& s) { return parse_double(s); };
        if (tk.size() == 5 && tk[1] == "<=" && tk[3] == "<=") {
            B.mention(tk[2]);
            B.bounds[tk[2]] = {num(tk[0]), num(tk[4])};
        } else if (tk.size() == 3 && (tk[1] == "<=" || tk[1] == ">=" || tk[1] == "=")) {
            B.mention(tk[0]);
            auto b = B.bounds.count(tk[0]) ? B.bounds[tk[0]] : std::pair<double, double>{0.0, kInf};
            double v = num(tk[2]);
            if (tk[1] == "<=") b.second = v;
            if (tk[1] == ">=") b.first = v;
            if (tk[1] == "=") b = {v, v};
            B.bounds[tk[0]] = b;
        } else if (tk.size() == 2 && lower(tk[1]) == "free") {
            B.mention(tk[0]);
            B.bounds[tk[0]] = {-kInf, kInf};
        } else {
            throw InputError("LP: unsupported bound line: " + bl);
        }
    }
    std::vector<std::pair<std::string, double>> objective;
    if (!obj_tokens.empty()) {
        std::vector<std::string> t = obj_tokens;
        if (t[0].back() == ':') t.erase(t.begin());
        objective = parse_terms(t);
    }
    for (const auto& [name, a] : objective) B.mention(name);
    for (const auto& r : rows)
        for (const auto& [name, a] : r.terms) B.mention(name);
    for (const auto& s : gen_names) {
        B.mention(s);
        B.integer[s] = true;
    }
    for (const auto& s : bin_names) {
        B.mention(s);
        B.integer[s] = true;
        if (!B.bounds.count(s)) B.bounds[s] = {0.0, 1.0};
    }
    return B.finish(objective, rows);
}

MilpModel parse_mps(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    enum class Sec { None, Name, Sense, Rows, Cols, Rhs, Bounds, End } sec = Sec::None;
    Builder B;
    std::string obj_row;
    std::vector<RawRow> rows;
    std::map<std::string, std::size_t> row_of;
    std::vector<std::pair<std::string, double>> objective;
    bool in_int = false;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '*') {
            const std::string tag = "* meta ";
            if (line.rfind(tag, 0) == 0) B.m.meta = meta_from_json(line.substr(tag.size()));
            continue;
        }
        auto tk = tokens(line);
        if (tk.empty()) continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            const std::string h = tk[0];
            if (h == "NAME") sec = Sec::Name;
            else if (h == "OBJSENSE") {
                sec = Sec::Sense;
                if (tk.size() > 1) B.m.sense = (tk[1] == "MAX" || tk[1] == "MAXIMIZE") ? Sense::Maximize : Sense::Minimize;
            } else if (h == "ROWS") sec = Sec::Rows;
            else if (h == "COLUMNS") sec = Sec::Cols;
            else if (h == "RHS") sec = Sec::Rhs;
            else if (h == "BOUNDS") sec = Sec::Bounds;
            else if (h == "ENDATA") sec = Sec::End;
            else throw InputError("MPS: unsupported section " + h);
            continue;
        }
        switch (sec) {
            case Sec::Sense: B.m.sense = (tk[0] == "MAX" || tk[0] == "MAXIMIZE") ? Sense::Maximize : Sense::Minimize; break;
            case Sec::Rows: {
                if (tk.size() != 2) throw InputError("MPS: bad ROWS line: " + line);
                if (tk[0] == "N") {
                    if (obj_row.empty()) obj_row = tk[1];
                    break;
                }
                RawRow r;
                r.name = tk[1];
                if (tk[0] == "L") r.rel = Relation::LessEq;
                else if (tk[0] == "G") r.rel = Relation::GreaterEq;
                else if (tk[0] == "E") r.rel = Relation::Equal;
                else throw InputError("MPS: bad row type " + tk[0]);
                row_of[r.name] = rows.size();
                rows.push_back(std::move(r));
                break;
            }
            case Sec::Cols: {
                if (tk.size() >= 3 && tk[1] == "'MARKER'") {
                    if (tk[2] == "'INTORG'") in_int = true;
                    else if (tk[2] == "'INTEND'") in_int = false;
                    else throw InputError("MPS: bad marker " + tk[2]);
                    break;
                }
                if (tk.size() != 3 && tk.size() != 5) throw InputError("MPS: bad COLUMNS line: " + line);
                B.mention(tk[0]);
                if (in_int) B.integer[tk[0]] = true;
                for (std::size_t p = 1; p + 1 < tk.size(); p += 2) {
                    double a = parse_double(tk[p + 1]);
                    if (tk[p] == obj_row) {
                        if (a != 0.0) objective.emplace_back(tk[0], a);
                        continue;
                    }
                    auto it = row_of.find(tk[p]);
                    if (it == row_of.end()) throw InputError("MPS: unknown row " + tk[p]);
                    rows[it->second].terms.emplace_back(tk[0], a);
                }
                break;
            }
            case Sec::Rhs: {
                if (tk.size() != 3 && tk.size() != 5) throw InputError("MPS: bad RHS line: " + line);
                for (std::size_t p = 1; p + 1 < tk.size(); p += 2) {
                    if (tk[p] == obj_row) continue;
                    auto it = row_of.find(tk[p]);
                    if (it == row_of.end()) throw InputError("MPS: unknown row " + tk[p]);
                    rows[it->second].rhs = parse_double(tk[p + 1]);
                }
                break;
            }
            case Sec::Bounds: {
                if (tk.size() < 3) throw InputError("MPS: bad BOUNDS line: " + line);
                const std::string& type = tk[0];
                const std::string& name = tk[2];
                if (!B.seen[name]) throw InputError("MPS: bound on unknown column " + name);
                auto b = B.bounds.count(name) ? B.bounds[name] : std::pair<double, double>{0.0, kInf};
                auto val = [&] {
                    if (tk.size() < 4) throw InputError("MPS: bound needs a value: " + line);
                    return parse_double(tk[3]);
                };
                if (type == "UP") b.second = val();
                else if (type == "LO") b.first = val();
                else if (type == "FX") b.first = b.second = val();
                else if (type == "FR") b = {-kInf, kInf};
                else if (type == "MI") b.first = -kInf;
                else if (type == "PL") b.second = kInf;
                else if (type == "BV") {
                    b = {0.0, 1.0};
                    B.integer[name] = true;
                } else throw InputError("MPS: unsupported bound type " + type);
                B.bounds[name] = b;
                break;
            }
            case Sec::Name: break;
            case Sec::None:
            case Sec::End: throw InputError("MPS: data outside any section: " + line);
        }
    }
    return B.finish(objective, rows);
}

}  // namespace

std::string export_model(const MilpModel& model, ModelFormat format) {
    return format == ModelFormat::Lp ? export_lp(model) : export_mps(model);
}

MilpModel parse_model(const std::string& text, ModelFormat format) {
    return format == ModelFormat::Lp ? parse_lp(text) : parse_mps(text);
}

}  // namespace bonusrank
