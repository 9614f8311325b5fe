#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fplan {

// Fixed-outline region with bottom-left corner at the origin.
struct DieRegion {
    double width = 0.0;
    double height = 0.0;

    double diagonal() const;
};

struct ModuleSpec {
    int id = 0;
    double width = 0.0;
    double height = 0.0;

    double area() const { return width * height; }
};

enum class Side : int { Left = 0, Right = 1, Top = 2, Bottom = 3 };

const char* side_name(Side s);

struct IoPinSpec {
    int id = 0;
    bool fixed = true;       // fixed coordinates vs. assigned to a boundary side
    double x = 0.0;          // used when fixed
    double y = 0.0;
    Side side = Side::Left;  // used when boundary-assigned
};

struct PinSpec {
    int id = 0;
    bool on_module = true;  // otherwise owned by an I/O pin
    int owner = 0;          // internal index into modules or io_pins
    double dx = 0.0;        // offset from the module's bottom-left corner
    double dy = 0.0;
};

struct Net {
    int id = 0;
    std::vector<int> pins;  // internal pin indices, size >= 2
    double weight = 1.0;
};

// Immutable problem description. Coordinate entities are the N_m modules
// followed by the N_io I/O pins; entity e has its x coordinate at position e
// and its y coordinate at position N + e of a Placement vector.
class Instance {
public:
    DieRegion die;
    std::vector<ModuleSpec> modules;
    std::vector<IoPinSpec> io_pins;
    std::vector<PinSpec> pins;
    std::vector<Net> nets;

    int num_modules() const { return static_cast<int>(modules.size()); }
    int num_io() const { return static_cast<int>(io_pins.size()); }
    int num_entities() const { return num_modules() + num_io(); }

    int x_index(int entity) const { return entity; }
    int y_index(int entity) const { return num_entities() + entity; }
    int io_entity(int io_index) const { return num_modules() + io_index; }

    // Throws std::invalid_argument on the first violated invariant.
    void validate() const;
};

// Coordinate vector z of length 2N, x block then y block. Module entries are
// bottom-left corners; I/O entries are pin positions.
struct Placement {
    std::vector<double> z;

    double x(const Instance& inst, int entity) const { return z[inst.x_index(entity)]; }
    double y(const Instance& inst, int entity) const { return z[inst.y_index(entity)]; }
    double& x(const Instance& inst, int entity) { return z[inst.x_index(entity)]; }
    double& y(const Instance& inst, int entity) { return z[inst.y_index(entity)]; }
};

Placement make_placement(const Instance& inst);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Absolute position of a pin: module corner plus offset, or the I/O entry
// (fixed I/O pins report their spec coordinates regardless of the vector).
Point pin_position(const Instance& inst, const Placement& p, int pin_index);

struct HpwlReport {
    double total = 0.0;
    std::vector<std::pair<int, double>> per_net;  // (net id, unweighted span)
};

HpwlReport hpwl(const Instance& inst, const Placement& p);
double hpwl_total(const Instance& inst, const Placement& p);

// One subgradient of HPWL with respect to the coordinate vector. Per net and
// axis the net weight is credited to the entity owning the maximal pin and
// debited from the entity owning the minimal pin; ties go to the lowest pin
// id. Fixed I/O pins contribute nothing.
std::vector<double> hpwl_subgradient(const Instance& inst, const Placement& p);

// Total pairwise module intersection area over total module area.
double relative_overlap_area(const Instance& inst, const Placement& p);

struct Violation {
    std::string constraint;  // "B_i^x", "B_i^y" or "O_{i,j}"
    double magnitude = 0.0;
};

bool check_feasible(const Instance& inst, const Placement& p, double tol,
                    std::vector<Violation>* violations = nullptr);

}  // namespace fplan
