#include "fplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fplan {

double DieRegion::diagonal() const { return std::hypot(width, height); }

const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "L";
        case Side::Right: return "R";
        case Side::Top: return "T";
        case Side::Bottom: return "B";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

void Instance::validate() const {
    if (!(die.width > 0.0) || !(die.height > 0.0))
        fail("die dimensions must be positive");
    for (const auto& m : modules) {
        if (!(m.width > 0.0) || !(m.height > 0.0))
            fail("module " + std::to_string(m.id) + " has non-positive size");
        if (m.width > die.width || m.height > die.height)
            fail("module " + std::to_string(m.id) + " does not fit in the die");
    }
    for (const auto& io : io_pins) {
        if (io.fixed) {
            if (io.x < 0.0 || io.x > die.width || io.y < 0.0 || io.y > die.height)
                fail("fixed I/O pin " + std::to_string(io.id) + " lies outside the die");
        }
    }
    for (const auto& p : pins) {
        if (p.on_module) {
            if (p.owner < 0 || p.owner >= num_modules())
                fail("pin " + std::to_string(p.id) + " references unknown module");
            const auto& m = modules[p.owner];
            if (p.dx < 0.0 || p.dx > m.width || p.dy < 0.0 || p.dy > m.height)
                fail("pin " + std::to_string(p.id) + " offset outside its module");
        } else {
            if (p.owner < 0 || p.owner >= num_io())
                fail("pin " + std::to_string(p.id) + " references unknown I/O pin");
            if (p.dx != 0.0 || p.dy != 0.0)
                fail("pin " + std::to_string(p.id) + " on an I/O pin must have zero offset");
        }
    }
    for (const auto& net : nets) {
        if (net.pins.size() < 2)
            fail("net " + std::to_string(net.id) + " has fewer than 2 pins");
        if (net.weight < 0.0)
            fail("net " + std::to_string(net.id) + " has negative weight");
        for (size_t a = 0; a < net.pins.size(); ++a) {
            int pa = net.pins[a];
            if (pa < 0 || pa >= static_cast<int>(pins.size()))
                fail("net " + std::to_string(net.id) + " references unknown pin");
            for (size_t b = a + 1; b < net.pins.size(); ++b)
                if (net.pins[b] == pa)
                    fail("net " + std::to_string(net.id) + " lists a pin twice");
        }
    }
}

Placement make_placement(const Instance& inst) {
    Placement p;
    p.z.assign(2 * static_cast<size_t>(inst.num_entities()), 0.0);
    return p;
}

Point pin_position(const Instance& inst, const Placement& p, int pin_index) {
    if (pin_index < 0 || pin_index >= static_cast<int>(inst.pins.size()))
        throw std::out_of_range("unknown pin index " + std::to_string(pin_index));
    const PinSpec& pin = inst.pins[pin_index];
    if (pin.on_module) {
        return {p.x(inst, pin.owner) + pin.dx, p.y(inst, pin.owner) + pin.dy};
    }
    const IoPinSpec& io = inst.io_pins[pin.owner];
    if (io.fixed) return {io.x, io.y};
    int e = inst.io_entity(pin.owner);
    return {p.x(inst, e), p.y(inst, e)};
}

HpwlReport hpwl(const Instance& inst, const Placement& p) {
    HpwlReport rep;
    for (const auto& net : inst.nets) {
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = xmax;
        for (int pi : net.pins) {
            Point pt = pin_position(inst, p, pi);
            xmin = std::min(xmin, pt.x);
            xmax = std::max(xmax, pt.x);
            ymin = std::min(ymin, pt.y);
            ymax = std::max(ymax, pt.y);
        }
        double span = (xmax - xmin) + (ymax - ymin);
        rep.per_net.emplace_back(net.id, span);
        rep.total += net.weight * span;
    }
    return rep;
}

double hpwl_total(const Instance& inst, const Placement& p) {
    return hpwl(inst, p).total;
}

namespace {

// Coordinate entity owning a pin, or -1 for fixed I/O pins.
int pin_entity(const Instance& inst, int pin_index) {
    const PinSpec& pin = inst.pins[pin_index];
    if (pin.on_module) return pin.owner;
    if (inst.io_pins[pin.owner].fixed) return -1;
    return inst.io_entity(pin.owner);
}

}  // namespace

std::vector<double> hpwl_subgradient(const Instance& inst, const Placement& p) {
    std::vector<double> g(2 * static_cast<size_t>(inst.num_entities()), 0.0);
    for (const auto& net : inst.nets) {
        for (int axis = 0; axis < 2; ++axis) {
            int max_pin = -1, min_pin = -1;
            double max_v = 0.0, min_v = 0.0;
            for (int pi : net.pins) {
                Point pt = pin_position(inst, p, pi);
                double v = axis == 0 ? pt.x : pt.y;
                int pid = inst.pins[pi].id;
                if (max_pin < 0 || v > max_v || (v == max_v && pid < inst.pins[max_pin].id)) {
                    max_pin = pi;
                    max_v = v;
                }
                if (min_pin < 0 || v < min_v || (v == min_v && pid < inst.pins[min_pin].id)) {
                    min_pin = pi;
                    min_v = v;
                }
            }
            int emax = pin_entity(inst, max_pin);
            int emin = pin_entity(inst, min_pin);
            if (emax >= 0)
                g[axis == 0 ? inst.x_index(emax) : inst.y_index(emax)] += net.weight;
            if (emin >= 0)
                g[axis == 0 ? inst.x_index(emin) : inst.y_index(emin)] -= net.weight;
        }
    }
    return g;
}

double relative_overlap_area(const Instance& inst, const Placement& p) {
    double total_area = 0.0;
    for (const auto& m : inst.modules) total_area += m.area();
    if (!(total_area > 0.0))
        throw std::invalid_argument("instance has zero total module area");
    double overlap = 0.0;
    int n = inst.num_modules();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double w = std::min(p.x(inst, i) + inst.modules[i].width,
                                p.x(inst, j) + inst.modules[j].width) -
                       std::max(p.x(inst, i), p.x(inst, j));
            double h = std::min(p.y(inst, i) + inst.modules[i].height,
                                p.y(inst, j) + inst.modules[j].height) -
                       std::max(p.y(inst, i), p.y(inst, j));
            if (w > 0.0 && h > 0.0) overlap += w * h;
        }
    }
    return overlap / total_area;
}

bool check_feasible(const Instance& inst, const Placement& p, double tol,
                    std::vector<Violation>* violations) {
    bool ok = true;
    auto record = [&](const std::string& name, double mag) {
        ok = false;
        if (violations) violations->push_back({name, mag});
    };
    int n = inst.num_modules();
    for (int i = 0; i < n; ++i) {
        double xi = p.x(inst, i), yi = p.y(inst, i);
        double xv = std::max(0.0 - xi, xi - (inst.die.width - inst.modules[i].width));
        double yv = std::max(0.0 - yi, yi - (inst.die.height - inst.modules[i].height));
        if (xv > tol) record("B_" + std::to_string(i) + "^x", xv);
        if (yv > tol) record("B_" + std::to_string(i) + "^y", yv);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            // separation violation in each of the four directions
            double vl = p.x(inst, i) + inst.modules[i].width - p.x(inst, j);
            double vr = p.x(inst, j) + inst.modules[j].width - p.x(inst, i);
            double vb = p.y(inst, i) + inst.modules[i].height - p.y(inst, j);
            double va = p.y(inst, j) + inst.modules[j].height - p.y(inst, i);
            double v = std::min(std::min(vl, vr), std::min(vb, va));
            if (v > tol)
                record("O_{" + std::to_string(i) + "," + std::to_string(j) + "}", v);
        }
    }
    return ok;
}

}  // namespace fplan
