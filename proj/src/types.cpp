#include "fgl/types.hpp"

namespace fgl {

const char* to_string(GestureClass c)
{
    switch (c) {
    case GestureClass::Palm: return "palm";
    case GestureClass::Perpendicular: return "perpendicular";
    case GestureClass::ThumbsUp: return "thumbs-up";
    }
    return "?";
}

const char* to_string(Variant v)
{
    return v == Variant::Human ? "human" : "sterile";
}

const char* to_string(Mode m)
{
    return m == Mode::Range ? "range" : "range-angle";
}

Mode mode_from_string(const std::string& s)
{
    if (s == "range") return Mode::Range;
    if (s == "range-angle") return Mode::RangeAngle;
    throw std::invalid_argument("unknown mode '" + s + "' (expected 'range' or 'range-angle')");
}

GestureClass gesture_from_string(const std::string& s)
{
    if (s == "palm") return GestureClass::Palm;
    if (s == "perpendicular") return GestureClass::Perpendicular;
    if (s == "thumbs-up") return GestureClass::ThumbsUp;
    throw std::invalid_argument("unknown gesture '" + s + "'");
}

} // namespace fgl
