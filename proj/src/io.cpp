#include "fplan/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fplan {

namespace {

using json = nlohmann::json;

struct Tokenizer {
    std::istringstream in;
    int line;
    explicit Tokenizer(const std::string& s, int line_) : in(s), line(line_) {}

    bool next(std::string& tok) { return static_cast<bool>(in >> tok); }

    std::string expect(const char* what) {
        std::string tok;
        if (!next(tok)) throw ParseError(line, std::string("expected ") + what);
        return tok;
    }

    double number(const char* what) {
        std::string tok = expect(what);
        size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw ParseError(line, std::string("expected a number for ") + what + ", got '" +
                                       tok + "'");
        }
        if (pos != tok.size() || !std::isfinite(v))
            throw ParseError(line, std::string("malformed number for ") + what + ": '" + tok +
                                       "'");
        return v;
    }

    int integer(const char* what) {
        double v = number(what);
        if (v != std::floor(v))
            throw ParseError(line, std::string(what) + " must be an integer");
        return static_cast<int>(v);
    }

    void done() {
        std::string tok;
        if (next(tok)) throw ParseError(line, "unexpected trailing token '" + tok + "'");
    }
};

}  // namespace

Instance parse_instance(const std::string& text) {
    Instance inst;
    bool have_die = false;
    std::map<int, int> module_ids, io_ids, pin_ids;
    std::map<int, int> net_ids;
    struct PendingPin {
        int line;
        int id;
        bool on_module;
        int owner_id;
        double dx, dy;
    };
    struct PendingNet {
        int line;
        Net net;
        std::vector<int> pin_refs;  // external ids
    };
    std::vector<PendingPin> pending_pins;
    std::vector<PendingNet> pending_nets;

    std::istringstream stream(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        Tokenizer tok(raw, lineno);
        std::string kw;
        if (!tok.next(kw)) continue;
        if (kw == "die") {
            if (have_die) throw ParseError(lineno, "duplicate die directive");
            inst.die.width = tok.number("die width");
            inst.die.height = tok.number("die height");
            if (!(inst.die.width > 0.0) || !(inst.die.height > 0.0))
                throw ParseError(lineno, "die dimensions must be positive");
            have_die = true;
            tok.done();
        } else if (kw == "module") {
            ModuleSpec m;
            m.id = tok.integer("module id");
            m.width = tok.number("module width");
            m.height = tok.number("module height");
            tok.done();
            if (module_ids.count(m.id))
                throw ParseError(lineno, "duplicate module id " + std::to_string(m.id));
            if (!(m.width > 0.0) || !(m.height > 0.0))
                throw ParseError(lineno, "module " + std::to_string(m.id) +
                                             " has non-positive size");
            module_ids[m.id] = inst.num_modules();
            inst.modules.push_back(m);
        } else if (kw == "iopin") {
            IoPinSpec io;
            io.id = tok.integer("iopin id");
            std::string mode = tok.expect("iopin mode (fixed|side)");
            if (mode == "fixed") {
                io.fixed = true;
                io.x = tok.number("iopin x");
                io.y = tok.number("iopin y");
            } else if (mode == "side") {
                io.fixed = false;
                std::string s = tok.expect("side letter");
                if (s == "L") io.side = Side::Left;
                else if (s == "R") io.side = Side::Right;
                else if (s == "T") io.side = Side::Top;
                else if (s == "B") io.side = Side::Bottom;
                else throw ParseError(lineno, "unknown side '" + s + "'");
            } else {
                throw ParseError(lineno, "unknown iopin mode '" + mode + "'");
            }
            tok.done();
            if (io_ids.count(io.id))
                throw ParseError(lineno, "duplicate iopin id " + std::to_string(io.id));
            io_ids[io.id] = inst.num_io();
            inst.io_pins.push_back(io);
        } else if (kw == "pin") {
            PendingPin p;
            p.line = lineno;
            p.id = tok.integer("pin id");
            std::string owner_kind = tok.expect("pin owner kind (module|iopin)");
            p.owner_id = tok.integer("owner id");
            if (owner_kind == "module") {
                p.on_module = true;
                p.dx = tok.number("pin x offset");
                p.dy = tok.number("pin y offset");
            } else if (owner_kind == "iopin") {
                p.on_module = false;
                p.dx = p.dy = 0.0;
            } else {
                throw ParseError(lineno, "unknown pin owner kind '" + owner_kind + "'");
            }
            tok.done();
            if (pin_ids.count(p.id))
                throw ParseError(lineno, "duplicate pin id " + std::to_string(p.id));
            pin_ids[p.id] = static_cast<int>(pending_pins.size());
            pending_pins.push_back(p);
        } else if (kw == "net") {
            PendingNet pn;
            pn.line = lineno;
            pn.net.id = tok.integer("net id");
            std::string t;
            bool first = true;
            while (tok.next(t)) {
                if (first && t == "weight") {
                    pn.net.weight = tok.number("net weight");
                    if (pn.net.weight < 0.0)
                        throw ParseError(lineno, "net weight must be nonnegative");
                    first = false;
                    continue;
                }
                first = false;
                Tokenizer one(t, lineno);
                pn.pin_refs.push_back(one.integer("pin id"));
            }
            if (pn.pin_refs.size() < 2)
                throw ParseError(lineno, "net " + std::to_string(pn.net.id) +
                                             " needs at least 2 pins");
            if (net_ids.count(pn.net.id))
                throw ParseError(lineno, "duplicate net id " + std::to_string(pn.net.id));
            net_ids[pn.net.id] = static_cast<int>(pending_nets.size());
            pending_nets.push_back(std::move(pn));
        } else {
            throw ParseError(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (!have_die) throw ParseError(lineno, "missing die directive");

    for (const auto& p : pending_pins) {
        PinSpec spec;
        spec.id = p.id;
        spec.on_module = p.on_module;
        spec.dx = p.dx;
        spec.dy = p.dy;
        if (p.on_module) {
            auto it = module_ids.find(p.owner_id);
            if (it == module_ids.end())
                throw ParseError(p.line, "pin " + std::to_string(p.id) +
                                             " references unknown module " +
                                             std::to_string(p.owner_id));
            spec.owner = it->second;
        } else {
            auto it = io_ids.find(p.owner_id);
            if (it == io_ids.end())
                throw ParseError(p.line, "pin " + std::to_string(p.id) +
                                             " references unknown iopin " +
                                             std::to_string(p.owner_id));
            spec.owner = it->second;
        }
        inst.pins.push_back(spec);
    }
    for (auto& pn : pending_nets) {
        for (int ref : pn.pin_refs) {
            auto it = pin_ids.find(ref);
            if (it == pin_ids.end())
                throw ParseError(pn.line, "net " + std::to_string(pn.net.id) +
                                              " references unknown pin " +
                                              std::to_string(ref));
            pn.net.pins.push_back(it->second);
        }
        inst.nets.push_back(std::move(pn.net));
    }

    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

namespace {

json config_to_json(const SolverConfig& c) {
    return json{{"num_perturbations", c.sm.num_perturbations},
                {"lambda_min", c.sm.lambda_min},
                {"lambda_init", c.sm.lambda_init},
                {"decay", c.sm.decay},
                {"eps_pref_rel", c.eps_pref_rel},
                {"reset_threshold", c.reset_threshold},
                {"gamma_init", c.gamma_init},
                {"gamma_growth", c.gamma_growth},
                {"eps_post", c.eps_post},
                {"stop_threshold", c.stop_threshold},
                {"max_iterations", c.max_iterations},
                {"post_max_iterations", c.post_max_iterations},
                {"io_assignment", c.io_assignment},
                {"seed", c.seed},
                {"key_area_quantile", c.key_area_quantile}};
}

SolverConfig config_from_json(const json& j) {
    SolverConfig c;
    c.sm.num_perturbations = j.at("num_perturbations").get<int>();
    c.sm.lambda_min = j.at("lambda_min").get<double>();
    c.sm.lambda_init = j.at("lambda_init").get<double>();
    c.sm.decay = j.at("decay").get<double>();
    c.eps_pref_rel = j.at("eps_pref_rel").get<double>();
    c.reset_threshold = j.at("reset_threshold").get<long>();
    c.gamma_init = j.at("gamma_init").get<double>();
    c.gamma_growth = j.at("gamma_growth").get<double>();
    c.eps_post = j.at("eps_post").get<double>();
    c.stop_threshold = j.at("stop_threshold").get<double>();
    c.max_iterations = j.at("max_iterations").get<long>();
    c.post_max_iterations = j.at("post_max_iterations").get<long>();
    c.io_assignment = j.at("io_assignment").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.key_area_quantile = j.at("key_area_quantile").get<double>();
    return c;
}

}  // namespace

std::string write_result(const SolveResult& r) {
    json trace = json::array();
    for (const auto& rec : r.trace)
        trace.push_back(json::array(
            {rec.k, rec.hpwl, rec.overlap, rec.gamma, rec.decay_index, rec.sweep_seconds}));
    json j{{"format", "fplan-result-v1"},
           {"config", config_to_json(r.config)},
           {"seed", r.config.seed},
           {"timings",
            {{"init", r.init_seconds}, {"global", r.global_seconds}, {"post", r.post_seconds}}},
           {"iterations", r.iterations},
           {"post_iterations", r.post_iterations},
           {"converged", r.converged},
           {"feasible", r.feasible},
           {"hpwl", r.hpwl},
           {"overlap", r.overlap},
           {"coordinates", r.placement.z},
           {"trace", trace}};
    return j.dump(2) + "\n";
}

SolveResult read_result(const std::string& text) {
    json j = json::parse(text);
    SolveResult r;
    r.config = config_from_json(j.at("config"));
    r.init_seconds = j.at("timings").at("init").get<double>();
    r.global_seconds = j.at("timings").at("global").get<double>();
    r.post_seconds = j.at("timings").at("post").get<double>();
    r.iterations = j.at("iterations").get<long>();
    r.post_iterations = j.at("post_iterations").get<long>();
    r.converged = j.at("converged").get<bool>();
    r.feasible = j.at("feasible").get<bool>();
    r.hpwl = j.at("hpwl").get<double>();
    r.overlap = j.at("overlap").get<double>();
    r.placement.z = j.at("coordinates").get<std::vector<double>>();
    for (const auto& rec : j.at("trace")) {
        IterationRecord ir;
        ir.k = rec.at(0).get<long>();
        ir.hpwl = rec.at(1).get<double>();
        ir.overlap = rec.at(2).get<double>();
        ir.gamma = rec.at(3).get<double>();
        ir.decay_index = rec.at(4).get<long>();
        ir.sweep_seconds = rec.at(5).get<double>();
        r.trace.push_back(ir);
    }
    return r;
}

SolveResult load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open result file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_result(buf.str());
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

std::string render_svg(const Instance& inst, const Placement& p) {
    double w = inst.die.width, h = inst.die.height;
    std::ostringstream svg;
    svg.precision(12);
    // die coordinates are y-up; flip into SVG's y-down space
    auto flip_rect = [&](double x, double y, double rw, double rh) {
        svg << "x=\"" << x << "\" y=\"" << (h - y - rh) << "\" width=\"" << rw
            << "\" height=\"" << rh << "\"";
    };
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h
        << "\">\n";
    svg << "  <rect ";
    flip_rect(0, 0, w, h);
    svg << " fill=\"none\" stroke=\"black\" stroke-width=\"" << 0.004 * inst.die.diagonal()
        << "\"/>\n";
    double label = 0.02 * inst.die.diagonal();
    for (int i = 0; i < inst.num_modules(); ++i) {
        const auto& m = inst.modules[i];
        double x = p.x(inst, i), y = p.y(inst, i);
        svg << "  <rect ";
        flip_rect(x, y, m.width, m.height);
        svg << " fill=\"#9ecae1\" fill-opacity=\"0.7\" stroke=\"#3182bd\" stroke-width=\""
            << 0.002 * inst.die.diagonal() << "\"/>\n";
        svg << "  <text x=\"" << (x + m.width / 2) << "\" y=\"" << (h - y - m.height / 2)
            << "\" font-size=\"" << label
            << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << m.id
            << "</text>\n";
    }
    // overlap highlights, one per overlapping pair
    for (int i = 0; i < inst.num_modules(); ++i) {
        for (int j = i + 1; j < inst.num_modules(); ++j) {
            double x0 = std::max(p.x(inst, i), p.x(inst, j));
            double x1 = std::min(p.x(inst, i) + inst.modules[i].width,
                                 p.x(inst, j) + inst.modules[j].width);
            double y0 = std::max(p.y(inst, i), p.y(inst, j));
            double y1 = std::min(p.y(inst, i) + inst.modules[i].height,
                                 p.y(inst, j) + inst.modules[j].height);
            if (x1 > x0 && y1 > y0) {
                svg << "  <rect ";
                flip_rect(x0, y0, x1 - x0, y1 - y0);
                svg << " fill=\"red\" fill-opacity=\"0.5\" class=\"overlap\"/>\n";
            }
        }
    }
    double tick = 0.01 * inst.die.diagonal();
    for (int io = 0; io < inst.num_io(); ++io) {
        int e = inst.io_entity(io);
        double x = inst.io_pins[io].fixed ? inst.io_pins[io].x : p.x(inst, e);
        double y = inst.io_pins[io].fixed ? inst.io_pins[io].y : p.y(inst, e);
        svg << "  <circle cx=\"" << x << "\" cy=\"" << (h - y) << "\" r=\"" << tick
            << "\" fill=\"#31a354\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace fplan
