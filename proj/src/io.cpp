#include "hipmlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hipmlab/errors.hpp"

namespace hipmlab {

namespace {

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + s +
                         "'");
    }
}

Interval atom_hull(const std::vector<DiscreteMeasure>& members) {
    double lo = members.front().atoms.front(), hi = lo;
    for (const auto& p : members) {
        for (double x : p.atoms) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (lo == hi) {  // keep the interval nonempty for single-point laws
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi};
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_measure_csv(const DiscreteMeasure& p, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "atom,weight\n";
    for (std::size_t j = 0; j < p.size(); ++j)
        out << format_double(p.atoms[j]) << ',' << format_double(p.weights[j]) << '\n';
}

DiscreteMeasure read_measure_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line) || line != "atom,weight")
        throw ParseError(path.string() + ":1: expected header 'atom,weight'");
    DiscreteMeasure p;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 2 fields");
        p.atoms.push_back(parse_double(fields[0], path, lineno));
        p.weights.push_back(parse_double(fields[1], path, lineno));
    }
    if (p.atoms.empty()) throw ParseError(path.string() + ": no atom rows");
    return p;
}

void write_law_csv(const EmpiricalLaw& law, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "member,atom,weight\n";
    for (std::size_t i = 0; i < law.size(); ++i) {
        const auto& p = law.members[i];
        for (std::size_t j = 0; j < p.size(); ++j)
            out << i << ',' << format_double(p.atoms[j]) << ',' << format_double(p.weights[j])
                << '\n';
    }
}

EmpiricalLaw read_law_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line) || line != "member,atom,weight")
        throw ParseError(path.string() + ":1: expected header 'member,atom,weight'");
    std::vector<DiscreteMeasure> members;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 3 fields");
        double member_field = parse_double(fields[0], path, lineno);
        auto i = static_cast<std::size_t>(member_field);
        if (member_field != static_cast<double>(i) || i > members.size())
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": member indices must be 0-based and contiguous");
        if (i == members.size()) members.emplace_back();
        members[i].atoms.push_back(parse_double(fields[1], path, lineno));
        members[i].weights.push_back(parse_double(fields[2], path, lineno));
    }
    if (members.empty()) throw ParseError(path.string() + ": no member rows");
    EmpiricalLaw law;
    law.members = std::move(members);
    law.domain = atom_hull(law.members);
    try {
        law.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return law;
}

void write_gridded_json(const GriddedLaw& law, const std::filesystem::path& path) {
    nlohmann::json j;
    j["a"] = law.grid.a;
    j["b"] = law.grid.b;
    j["M"] = law.grid.points;
    j["weights"] = law.weights;
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
}

GriddedLaw read_gridded_json(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    GriddedLaw law;
    try {
        law.grid = Grid(j.at("a").get<double>(), j.at("b").get<double>(),
                        j.at("M").get<std::size_t>());
        law.weights = j.at("weights").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (law.weights.size() % law.grid.points != 0)
        throw ShapeError(path.string() + ": weight count not a multiple of M");
    law.members = law.weights.size() / law.grid.points;
    law.validate();
    return law;
}

void write_cost_matrix_csv(const CostMatrix& cost, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    for (std::size_t i = 0; i < cost.n; ++i) {
        for (std::size_t j = 0; j < cost.n; ++j) {
            if (j > 0) out << ',';
            out << format_double(cost.at(i, j));
        }
        out << '\n';
    }
}

std::string ascent_config_to_json(const AscentConfig& config) {
    nlohmann::json j;
    j["n_init"] = config.n_init;
    j["n_step"] = config.n_step;
    j["epsilon"] = config.epsilon;
    j["include_identity_init"] = config.include_identity_init;
    j["seed"] = config.seed;
    j["line_search"] =
        config.line_search == LineSearchRule::projected ? "projected" : "full_gradient";
    return j.dump(2);
}

AscentConfig ascent_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ascent config: ") + e.what());
    }
    AscentConfig config;
    config.n_init = j.value("n_init", config.n_init);
    config.n_step = j.value("n_step", config.n_step);
    config.epsilon = j.value("epsilon", config.epsilon);
    config.include_identity_init = j.value("include_identity_init", config.include_identity_init);
    config.seed = j.value("seed", config.seed);
    std::string rule = j.value("line_search", std::string("projected"));
    if (rule == "projected") config.line_search = LineSearchRule::projected;
    else if (rule == "full_gradient") config.line_search = LineSearchRule::full_gradient;
    else throw ParseError("ascent config: unknown line_search '" + rule + "'");
    return config;
}

void write_ascent_trace_csv(const std::vector<AscentTraceRow>& trace,
                            const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "restart,iteration,value,step\n";
    for (const auto& row : trace)
        out << row.restart << ',' << row.iteration << ',' << format_double(row.value) << ','
            << format_double(row.step) << '\n';
}

}  // namespace hipmlab
