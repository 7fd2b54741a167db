#include "nlgraph/config.hpp"

namespace nlgraph {

std::string to_string(CitKind k) {
    return k == CitKind::kernel ? "kernel" : "perm";
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::restricted: return "restricted";
        default: return "blanket";
    }
}

CitKind cit_kind_from_string(const std::string& s) {
    if (s == "kernel") return CitKind::kernel;
    if (s == "perm" || s == "permutation") return CitKind::permutation;
    throw BadFlagError("unknown CIT kind: " + s);
}

Variant variant_from_string(const std::string& s) {
    if (s == "full") return Variant::full;
    if (s == "restricted") return Variant::restricted;
    if (s == "blanket") return Variant::blanket;
    throw BadFlagError("unknown variant: " + s);
}

}  // namespace nlgraph
