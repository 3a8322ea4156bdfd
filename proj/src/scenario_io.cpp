#include "mapfr/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace mapfr {

namespace {

constexpr const char* kScenarioHeader = "mapfr-scenario";
constexpr const char* kSolutionHeader = "mapfr-solution";

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream words(raw);
        Line line{number, {}};
        for (std::string w; words >> w;) line.tokens.push_back(w);
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

double parse_real(const Line& line, std::size_t index, const std::string& field) {
    if (index >= line.tokens.size()) throw ParseError(line.number, field, field + " required");
    const std::string& tok = line.tokens[index];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value))
        throw ParseError(line.number, field, "invalid number '" + tok + "'");
    return value;
}

Time parse_duration(const Line& line, std::size_t index, const std::string& field) {
    if (index < line.tokens.size() && line.tokens[index] == "inf") return Time::unbounded();
    return parse_real(line, index, field);
}

void expect_arity(const Line& line, std::size_t min, std::size_t max) {
    const std::string& kw = line.tokens[0];
    if (line.tokens.size() < min)
        throw ParseError(line.number, kw, kw + ": expected at least " + std::to_string(min - 1) + " fields");
    if (line.tokens.size() > max)
        throw ParseError(line.number, kw, kw + ": too many fields");
}

void expect_header(const std::vector<Line>& lines, const char* header) {
    if (lines.empty() || lines[0].tokens[0] != header)
        throw ParseError(lines.empty() ? 1 : lines[0].number, "header",
                         std::string("expected header '") + header + " 1'");
    if (lines[0].tokens.size() != 2 || lines[0].tokens[1] != "1")
        throw ParseError(lines[0].number, "version", "unsupported format version");
}

VertexId lookup_vertex(const Instance& inst, const Line& line, std::size_t index,
                       const std::string& field) {
    const auto v = inst.find_vertex(line.tokens.at(index));
    if (!v) throw ParseError(line.number, field, "unknown vertex '" + line.tokens[index] + "'");
    return *v;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), field_(field) {}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Instance parse_scenario(const std::string& text) {
    const auto lines = tokenize(text);
    expect_header(lines, kScenarioHeader);
    Instance inst;
    bool have_radius = false;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const Line& line = lines[k];
        const std::string& kw = line.tokens[0];
        if (kw == "radius") {
            expect_arity(line, 2, 2);
            if (have_radius) throw ParseError(line.number, "radius", "radius given twice");
            inst.radius = parse_real(line, 1, "radius");
            if (!(inst.radius > 0.0)) throw ParseError(line.number, "radius", "radius must be positive");
            have_radius = true;
        } else if (kw == "vertex") {
            expect_arity(line, 4, 4);
            if (inst.find_vertex(line.tokens[1]))
                throw ParseError(line.number, "vertex", "duplicate vertex '" + line.tokens[1] + "'");
            inst.add_vertex(line.tokens[1], {parse_real(line, 2, "x"), parse_real(line, 3, "y")});
        } else if (kw == "edge") {
            expect_arity(line, 3, 4);
            const VertexId u = lookup_vertex(inst, line, 1, "edge.u");
            const VertexId v = lookup_vertex(inst, line, 2, "edge.v");
            std::optional<double> length;
            if (line.tokens.size() == 4) length = parse_real(line, 3, "edge.length");
            inst.add_edge(u, v, length);
        } else if (kw == "agent") {
            expect_arity(line, 4, 4);
            if (inst.find_agent(line.tokens[1]))
                throw ParseError(line.number, "agent", "duplicate agent '" + line.tokens[1] + "'");
            inst.add_agent(line.tokens[1], lookup_vertex(inst, line, 2, "agent.start"),
                           lookup_vertex(inst, line, 3, "agent.goal"));
        } else {
            throw ParseError(line.number, kw, "unknown record '" + kw + "'");
        }
    }
    if (!have_radius) throw ParseError(lines.back().number, "radius", "radius required");
    return inst;
}

std::string format_scenario(const Instance& inst) {
    std::ostringstream out;
    out << kScenarioHeader << " 1\n";
    out << "radius " << format_number(inst.radius) << "\n";
    for (const Vertex& v : inst.vertices)
        out << "vertex " << v.name << " " << format_number(v.position.x()) << " "
            << format_number(v.position.y()) << "\n";
    for (const Edge& e : inst.edges)
        out << "edge " << inst.vertices[e.u].name << " " << inst.vertices[e.v].name << " "
            << format_number(e.length) << "\n";
    for (const Agent& a : inst.agents)
        out << "agent " << a.name << " " << inst.vertices[a.start].name << " "
            << inst.vertices[a.goal].name << "\n";
    return out.str();
}

Solution parse_solution(const std::string& text, const Instance& inst) {
    const auto lines = tokenize(text);
    expect_header(lines, kSolutionHeader);
    std::map<AgentId, std::vector<TimedMotion>> motions;
    std::optional<AgentId> current;
    std::size_t last_line = lines.front().number;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const Line& line = lines[k];
        last_line = line.number;
        const std::string& kw = line.tokens[0];
        if (kw == "plan") {
            expect_arity(line, 2, 2);
            if (current) throw ParseError(line.number, "plan", "plan opened before previous 'end'");
            const auto a = inst.find_agent(line.tokens[1]);
            if (!a) throw ParseError(line.number, "plan", "unknown agent '" + line.tokens[1] + "'");
            if (motions.count(*a)) throw ParseError(line.number, "plan", "duplicate plan for agent");
            current = *a;
            motions[*a];
        } else if (kw == "end") {
            if (!current) throw ParseError(line.number, "end", "'end' without 'plan'");
            current.reset();
        } else if (kw == "move" || kw == "wait") {
            if (!current) throw ParseError(line.number, kw, kw + " outside a plan block");
            if (kw == "move") {
                expect_arity(line, 4, 4);
                const VertexId from = lookup_vertex(inst, line, 1, "move.from");
                const VertexId to = lookup_vertex(inst, line, 2, "move.to");
                const double start = parse_real(line, 3, "move.start");
                if (!inst.find_edge(from, to))
                    throw ParseError(line.number, "move", "no edge between move endpoints");
                motions[*current].push_back(TimedMotion::move(inst, from, to, start));
            } else {
                expect_arity(line, 4, 4);
                const VertexId at = lookup_vertex(inst, line, 1, "wait.vertex");
                const double start = parse_real(line, 2, "wait.start");
                const Time dur = parse_duration(line, 3, "wait.duration");
                motions[*current].push_back(TimedMotion::wait(at, start, dur));
            }
        } else {
            throw ParseError(line.number, kw, "unknown record '" + kw + "'");
        }
    }
    if (current) throw ParseError(last_line, "end", "plan block not closed");
    Solution sol;
    for (AgentId a = 0; a < inst.agents.size(); ++a) {
        auto it = motions.find(a);
        if (it == motions.end())
            throw ParseError(last_line, "plan", "missing plan for agent '" + inst.agents[a].name + "'");
        sol.plans.push_back(normalize_plan(inst, a, it->second));
    }
    return sol;
}

std::string format_solution(const Instance& inst, const Solution& sol) {
    std::ostringstream out;
    out << kSolutionHeader << " 1\n";
    for (const Plan& p : sol.plans) {
        out << "plan " << inst.agents.at(p.agent).name << "\n";
        for (const TimedMotion& m : p.motions) {
            if (m.is_wait())
                out << "wait " << inst.vertices[m.from].name << " " << format_number(m.start) << " "
                    << format_time(m.duration) << "\n";
            else
                out << "move " << inst.vertices[m.from].name << " " << inst.vertices[m.to].name << " "
                    << format_number(m.start) << "\n";
        }
        out << "end\n";
    }
    return out.str();
}

namespace {
std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

Instance load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

Solution load_solution(const std::filesystem::path& path, const Instance& inst) {
    return parse_solution(read_file(path), inst);
}

void save_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace mapfr
