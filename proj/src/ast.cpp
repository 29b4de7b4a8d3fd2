#include "pedal/ast.hpp"

namespace pedal {

const char* to_string(Plane p) {
    switch (p) {
    case Plane::None: return "None";
    case Plane::FR: return "FR";
    case Plane::LT: return "LT";
    case Plane::BI: return "BI";
    }
    return "None";
}

const char* to_string(XRay x) {
    switch (x) {
    case XRay::Standby: return "Standby";
    case XRay::Fluo: return "Fluo";
    case XRay::SingleShot: return "SingleShot";
    case XRay::Series: return "Series";
    }
    return "Standby";
}

std::optional<Plane> plane_from_string(std::string_view s) {
    if (s == "None") return Plane::None;
    if (s == "FR") return Plane::FR;
    if (s == "LT") return Plane::LT;
    if (s == "BI") return Plane::BI;
    return std::nullopt;
}

std::optional<XRay> xray_from_string(std::string_view s) {
    if (s == "Standby") return XRay::Standby;
    if (s == "Fluo") return XRay::Fluo;
    if (s == "SingleShot") return XRay::SingleShot;
    if (s == "Series") return XRay::Series;
    return std::nullopt;
}

} // namespace pedal
