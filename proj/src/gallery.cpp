#include "minface/gallery.hpp"

#include <fmt/format.h>

#include "minface/error.hpp"

namespace minface {
namespace {

std::vector<GalleryEntry> build() {
    std::vector<GalleryEntry> out;

    const RealWeierstrassData enneper{parse("u"),      parse("-v"), parse("1/2"), parse("1/2"),
                                      {-3, 3, -3, 3}, {0, 0},      {0, 0, 0}};
    out.push_back({"enneper",
                   "timelike Enneper surface of isothermic type; swallowtails at (1,-1), (-1,1)",
                   enneper});
    out.push_back({"enneper-conj",
                   "conjugate of the Enneper surface; cuspidal cross caps at (1,-1), (-1,1)",
                   conjugate_data(enneper)});

    out.push_back({"ce-quasiumbilic",
                   "singular set u = 1/(1+v^2) of cuspidal edges only; K changes sign across v = 0",
                   RealWeierstrassData{parse("u"), parse("1+v^2"), parse("1"), parse("1"),
                                       {0, 2, -2, 2}, {0, 0}, {0, 0, 0}}});

    out.push_back({"kchange",
                   "null-curve pair with an umbilic point at the origin and quasi-umbilic axes",
                   RawCurveData{{parse("u+u^5/5"), parse("2/3*u^3"), parse("u-u^5/5")},
                                {parse("-v-v^5/5"), parse("2/3*v^3"), parse("v-v^5/5")},
                                {-1.5, 1.5, -1.5, 1.5},
                                {0, 0},
                                {0, 0, 0}}});
    return out;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
    static const std::vector<GalleryEntry> entries = build();
    return entries;
}

const GalleryEntry& gallery_entry(std::string_view name) {
    for (const auto& e : gallery()) {
        if (e.name == name) return e;
    }
    throw Error(ErrorKind::Spec, fmt::format("unknown gallery surface '{}'", name));
}

}  // namespace minface
