#include "cli.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <system_error>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "minface/curvature.hpp"
#include "minface/error.hpp"
#include "minface/gallery.hpp"
#include "minface/mesh.hpp"
#include "minface/singular.hpp"
#include "minface/surface.hpp"
#include "minface/verify.hpp"

namespace minface::cli {
namespace {

// Shortest round-trip form, always with a decimal point or exponent.
std::string format_real(double x) {
    std::string s = fmt::format("{}", x);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string_view flat_name(FlatTag t) {
    switch (t) {
        case FlatTag::NonFlat: return "non_flat";
        case FlatTag::QuasiUmbilic: return "quasi_umbilic";
        case FlatTag::Umbilic: return "umbilic";
    }
    return "non_flat";
}

// Any error while loading the surface file exits 2, whatever its kind.
struct SpecFailure {
    std::string source;
    Error error;
};

Minface load_surface(const std::string& spec) {
    try {
        constexpr std::string_view prefix = "gallery:";
        if (spec.rfind(prefix, 0) == 0) {
            return Minface(gallery_entry(spec.substr(prefix.size())).data);
        }
        return Minface(load_spec(spec));
    } catch (const Error& e) {
        throw SpecFailure{spec, e};
    }
}

int report(const Error& e, const std::string& source, std::ostream& err, int code) {
    err << "error";
    if (!source.empty()) err << ": " << source;
    if (e.offset()) err << ": offset " << *e.offset();
    err << ": " << e.what() << " [" << to_string(e.kind()) << "]\n";
    return code;
}

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::Syntax:
        case ErrorKind::NonIntegerExponent:
        case ErrorKind::MultipleVariables:
        case ErrorKind::InvalidData:
        case ErrorKind::DataConversionDegenerate:
        case ErrorKind::ModeUnsupported:
        case ErrorKind::Spec:
            return kSpecError;
        default:
            return kNumericFailure;
    }
}

struct Options {
    std::string spec, out, fields, method, name;
    int nu = 64, nv = 64, grid = 256, samples = 1000;
    double u = 0.0, v = 0.0, h = kIntrinsicStep;
    std::uint64_t seed = 1;
};

int cmd_sample(const Options& o, std::ostream& out) {
    const Minface m = load_surface(o.spec);
    const SurfaceMesh mesh = sample_grid(m, o.nu, o.nv);
    export_obj(mesh, o.out);
    out << fmt::format("wrote {} vertices and {} faces to {}\n", mesh.vertices.size(),
                       mesh.faces.size(), o.out);
    if (!o.fields.empty()) {
        export_fields_csv(mesh, o.fields);
        out << fmt::format("wrote vertex fields to {}\n", o.fields);
    }
    return kOk;
}

int cmd_singular(const Options& o, std::ostream& out) {
    const Minface m = load_surface(o.spec);
    const auto curves = trace_singular_set(m, o.grid);
    save_singular_csv(curves, o.out);
    std::map<std::string_view, int> counts;
    std::size_t points = 0;
    for (const auto& c : curves) {
        points += c.points.size();
        for (const auto& r : c.points) ++counts[to_string(r.tag)];
    }
    out << fmt::format("{} curves, {} points written to {}\n", curves.size(), points, o.out);
    for (const auto& [tag, n] : counts) out << fmt::format("{} {}\n", tag, n);
    return kOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
    const Minface m = load_surface(o.spec);
    if (m.is_weierstrass()) {
        const auto& d = m.weierstrass();
        const double gg = d.g1.eval(o.u) * d.g2.eval(o.v);
        if (std::abs(1.0 - gg) <= kSingularTol * (1.0 + std::abs(gg))) {
            out << to_string(classify_singular(m, {o.u, o.v}).tag) << "\n";
            return kOk;
        }
    } else if (!m.jets_at(o.u, o.v).regular()) {
        throw Error(ErrorKind::ModeUnsupported,
                    "singular points of raw-curve surfaces are not classified");
    }
    out << flat_name(flat_classify(m.curves(), o.u, o.v).tag) << "\n";
    return kOk;
}

int cmd_curvature(const Options& o, std::ostream& out) {
    const Minface m = load_surface(o.spec);
    double k = 0.0;
    if (o.method.empty()) {
        k = gaussian_curvature(m, o.u, o.v);
    } else if (o.method == "closed") {
        (void)m.weierstrass();
        k = gaussian_curvature(m, o.u, o.v);
    } else if (o.method == "extrinsic") {
        k = gaussian_curvature_extrinsic(m.jets_at(o.u, o.v));
    } else {
        k = gaussian_curvature_intrinsic_fd(m, o.u, o.v, o.h);
    }
    out << format_real(k) << "\n";
    return kOk;
}

int cmd_conjugate(const Options& o, std::ostream& out) {
    const Minface m = load_surface(o.spec);
    save_spec(conjugate_data(m.data()), o.out);
    out << fmt::format("wrote conjugate spec to {}\n", o.out);
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const Minface m = load_surface(o.spec);
    BatteryOptions opts;
    opts.seed = o.seed;
    opts.samples = o.samples;
    const auto results = run_battery(m, opts);
    bool all = true;
    for (const auto& r : results) {
        out << fmt::format("{:<4} {:<46} {:>12.4g} <= {:<8.3g} ({} samples)\n",
                           r.passed ? "PASS" : "FAIL", r.name, r.value, r.tolerance, r.samples);
        all &= r.passed;
    }
    out << (all ? "all checks passed\n" : "some checks failed\n");
    return all ? kOk : kNumericFailure;
}

int cmd_gallery(const Options& o, std::ostream& out) {
    if (o.name.empty()) {
        for (const auto& e : gallery()) out << fmt::format("{:<16} {}\n", e.name, e.note);
        return kOk;
    }
    const GalleryEntry* entry = nullptr;
    try {
        entry = &gallery_entry(o.name);
    } catch (const Error& e) {
        throw SpecFailure{o.name, e};
    }
    const std::filesystem::path dir(o.out.empty() ? "." : o.out);
    std::filesystem::create_directories(dir);
    const auto base = dir / entry->name;
    save_spec(entry->data, base.string() + ".json");
    const Minface m(entry->data);
    const SurfaceMesh mesh = sample_grid(m, o.nu, o.nv);
    export_obj(mesh, base.string() + ".obj");
    export_fields_csv(mesh, base.string() + "_fields.csv");
    out << fmt::format("wrote {0}.json, {0}.obj, {0}_fields.csv", base.string());
    if (m.is_weierstrass()) {
        save_singular_csv(trace_singular_set(m, o.grid), base.string() + "_singular.csv");
        out << fmt::format(", {}_singular.csv", base.string());
    }
    out << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Timelike minimal surfaces with singularities in Lorentz-Minkowski 3-space",
                 "minface"};
    app.require_subcommand(1);
    Options o;

    auto spec = [&](CLI::App* s) {
        s->add_option("--spec", o.spec, "surface spec file, or gallery:NAME")->required();
    };
    auto point = [&](CLI::App* s) {
        s->add_option("--u", o.u, "u parameter")->required();
        s->add_option("--v", o.v, "v parameter")->required();
    };

    CLI::App* sample = app.add_subcommand("sample", "sample a grid mesh and export OBJ");
    spec(sample);
    sample->add_option("--nu", o.nu, "cells along u")->required()->check(CLI::Range(2, 1 << 14));
    sample->add_option("--nv", o.nv, "cells along v")->required()->check(CLI::Range(2, 1 << 14));
    sample->add_option("--out", o.out, "OBJ output path")->required();
    sample->add_option("--fields", o.fields, "per-vertex CSV output path");

    CLI::App* singular = app.add_subcommand("singular", "trace and classify the singular set");
    spec(singular);
    singular->add_option("--grid", o.grid, "grid size")->required()->check(CLI::Range(16, 1 << 14));
    singular->add_option("--out", o.out, "CSV output path")->required();

    CLI::App* classify = app.add_subcommand("classify", "classify a point");
    spec(classify);
    point(classify);

    CLI::App* curvature = app.add_subcommand("curvature", "Gaussian curvature at a point");
    spec(curvature);
    point(curvature);
    curvature->add_option("--method", o.method, "closed, extrinsic or intrinsic")
        ->check(CLI::IsMember({"closed", "extrinsic", "intrinsic"}));
    curvature->add_option("--step", o.h, "intrinsic stencil step")->check(CLI::PositiveNumber);

    CLI::App* conjugate = app.add_subcommand("conjugate", "write the conjugate surface spec");
    spec(conjugate);
    conjugate->add_option("--out", o.out, "spec output path")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the oracle and property battery");
    spec(verify);
    verify->add_option("--seed", o.seed, "random seed");
    verify->add_option("--samples", o.samples, "points per sampled check")
        ->check(CLI::Range(1, 1000000));

    CLI::App* gal = app.add_subcommand("gallery", "list or export built-in surfaces");
    gal->add_option("--name", o.name, "entry to export; lists entries when omitted");
    gal->add_option("--out", o.out, "output directory");
    gal->add_option("--nu", o.nu, "mesh cells along u")->check(CLI::Range(2, 1 << 14));
    gal->add_option("--nv", o.nv, "mesh cells along v")->check(CLI::Range(2, 1 << 14));
    gal->add_option("--grid", o.grid, "singular trace grid")->check(CLI::Range(16, 1 << 14));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sample) return cmd_sample(o, out);
        if (*singular) return cmd_singular(o, out);
        if (*classify) return cmd_classify(o, out);
        if (*curvature) return cmd_curvature(o, out);
        if (*conjugate) return cmd_conjugate(o, out);
        if (*verify) return cmd_verify(o, out);
        return cmd_gallery(o, out);
    } catch (const SpecFailure& f) {
        return report(f.error, f.source, err, kSpecError);
    } catch (const Error& e) {
        return report(e, "", err, exit_code_for(e.kind()));
    } catch (const std::system_error& e) {
        err << "error: " << e.what() << "\n";
        return kSpecError;
    }
}

}  // namespace minface::cli
