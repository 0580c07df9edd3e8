#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "topodeg/bmo.hpp"
#include "topodeg/cli.hpp"
#include "topodeg/degree.hpp"
#include "topodeg/io.hpp"
#include "topodeg/mapzoo.hpp"
#include "topodeg/regularity.hpp"

namespace py = pybind11;
using namespace topodeg;

namespace {

Vec to_vec(const std::vector<double>& v) {
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

std::vector<double> from_vec(const Vec& v) {
    return std::vector<double>(v.begin(), v.end());
}

py::dict report_dict(const DegreeReport& r) {
    py::dict d;
    d["method"] = degree_method_name(r.method);
    d["y"] = from_vec(r.y);
    d["value"] = r.value;
    d["raw"] = r.raw;
    d["residual"] = r.residual;
    d["inconclusive"] = r.inconclusive;
    py::list pre;
    for (const auto& [z, s] : r.preimages) {
        py::dict rec;
        rec["point"] = from_vec(z);
        rec["sign"] = s;
        pre.append(rec);
    }
    d["preimages"] = pre;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Brouwer degree computation and oscillation/BMO diagnostics";
    m.attr("__version__") = kToolVersion;

    py::class_<Domain>(m, "Domain")
        .def_static(
            "box",
            [](const std::vector<double>& lo, const std::vector<double>& hi, int res) {
                return Domain::box(to_vec(lo), to_vec(hi), res);
            },
            py::arg("lo"), py::arg("hi"), py::arg("resolution"))
        .def_static(
            "ball",
            [](const std::vector<double>& c, double r, int res) {
                return Domain::ball(to_vec(c), r, res);
            },
            py::arg("center"), py::arg("radius"), py::arg("resolution"))
        .def_property_readonly("dimension", &Domain::dimension)
        .def_property_readonly("resolution", &Domain::resolution)
        .def("contains", [](const Domain& d, const std::vector<double>& x) {
            return d.contains(to_vec(x));
        })
        .def("dist_to_boundary", [](const Domain& d, const std::vector<double>& x) {
            return d.dist_to_boundary(to_vec(x));
        })
        .def("cell_volume", &Domain::cell_volume)
        .def("inner", [](const Domain& d, double eps) { return inner_domain(d, eps); });

    py::class_<MapField>(m, "MapField")
        .def_property_readonly("name", &MapField::name)
        .def_property_readonly("source_dim", &MapField::source_dim)
        .def_property_readonly("target_dim", &MapField::target_dim)
        .def("__call__", [](const MapField& f, const std::vector<double>& x) {
            return from_vec(f(to_vec(x)));
        })
        .def("gradient", [](const MapField& f, const std::vector<double>& x, double h) {
            const Mat g = f.gradient_or_fd(to_vec(x), h);
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < g.rows(); ++i) {
                std::vector<double> row;
                for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
                rows.push_back(row);
            }
            return rows;
        }, py::arg("x"), py::arg("h") = 1e-5);

    m.def("zoo_names", &zoo_names);
    m.def(
        "preset",
        [](const std::string& name, const std::map<std::string, double>& params) {
            const ZooEntry e = preset(name, params);
            py::dict props;
            props["det_sign"] = e.props.det_sign;
            props["det_nonneg"] = e.props.det_nonneg;
            props["injective"] = e.props.injective;
            props["w1n"] = e.props.sobolev_w1n;
            props["smooth"] = e.props.smooth;
            props["notes"] = e.props.notes;
            return py::make_tuple(e.map, props);
        },
        py::arg("name"), py::arg("params") = std::map<std::string, double>{});
    m.def("map_from_spec", &resolve_map_spec, py::arg("spec"));
    m.def("domain_from_spec", &resolve_domain_spec, py::arg("spec"), py::arg("resolution") = 128);

    m.def(
        "degree_counting",
        [](const MapField& f, const Domain& d, const std::vector<double>& y) {
            return report_dict(degree_by_counting(f, d, to_vec(y)));
        },
        py::arg("map"), py::arg("domain"), py::arg("y"));
    m.def(
        "degree_integral",
        [](const MapField& f, const Domain& d, const std::vector<double>& y, double bump) {
            DegreeOptions opts;
            opts.bump_radius = bump;
            return report_dict(degree_by_integral(f, d, to_vec(y), opts));
        },
        py::arg("map"), py::arg("domain"), py::arg("y"), py::arg("bump_radius") = 0.15);
    m.def(
        "degree_winding",
        [](const MapField& f, const Domain& d, const std::vector<double>& y, int bres) {
            const BoundaryMesh mesh = boundary_mesh(d, bres);
            return winding_number(boundary_values(f, mesh), to_vec(y));
        },
        py::arg("map"), py::arg("domain"), py::arg("y"), py::arg("boundary_resolution") = 1024);
    m.def(
        "degree_pullback",
        [](const MapField& f, const Domain& d, const std::vector<double>& y, double bump) {
            DegreeOptions opts;
            opts.bump_radius = bump;
            return report_dict(boundary_pullback_degree(f, d, to_vec(y), opts));
        },
        py::arg("map"), py::arg("domain"), py::arg("y"), py::arg("bump_radius") = 0.15);

    m.def(
        "degree_raster",
        [](const MapField& f, const Domain& d, int yres) {
            const ESetRaster raster = degree_region_auto(f, d, yres);
            py::dict out;
            out["lo"] = from_vec(raster.lo);
            out["hi"] = from_vec(raster.hi);
            out["resolution"] = raster.resolution;
            out["degree"] = raster.degree;
            out["boundary"] = std::vector<int>(raster.boundary_flag.begin(),
                                               raster.boundary_flag.end());
            out["diam"] = raster.mask_diameter();
            return out;
        },
        py::arg("map"), py::arg("domain"), py::arg("yres") = 96);

    m.def(
        "f_set_diam",
        [](const MapField& f, const Domain& d, const std::vector<double>& a,
           const std::vector<double>& radii, int yres) {
            const FSetReport rep = f_set(f, d, to_vec(a), radii, yres);
            py::dict out;
            out["diam"] = rep.diam;
            out["sphere_osc"] = rep.sphere_osc;
            out["mask_diam"] = rep.mask_diam;
            out["empty"] = rep.empty_intersection;
            return out;
        },
        py::arg("map"), py::arg("domain"), py::arg("a"), py::arg("radii"), py::arg("yres") = 64);

    m.def(
        "essential_oscillation",
        [](const MapField& f, const Domain& d, const std::vector<double>& c, double r,
           double trim) { return essential_oscillation(f, d, to_vec(c), r, trim); },
        py::arg("map"), py::arg("domain"), py::arg("center"), py::arg("radius"),
        py::arg("trim") = 1e-3);

    m.def(
        "mean_oscillation",
        [](const MapField& f, const Domain& d, const std::vector<double>& x, double eps) {
            return mean_oscillation(f, d, to_vec(x), eps);
        },
        py::arg("map"), py::arg("domain"), py::arg("x"), py::arg("eps"));
    m.def(
        "vmo_modulus",
        [](const MapField& f, const Domain& d, const std::vector<double>& eps) {
            return vmo_modulus(f, d, eps);
        },
        py::arg("map"), py::arg("domain"), py::arg("eps_list"));
    m.def(
        "bmo_seminorm",
        [](const MapField& f, const Domain& d, std::uint64_t seed) {
            return bmo_seminorm(f, d, make_bmo_plan(d, seed)).seminorm;
        },
        py::arg("map"), py::arg("domain"), py::arg("seed") = 1);

    m.def(
        "vmo_degree",
        [](const MapField& f, const Domain& d, const std::vector<double>& p,
           const std::vector<double>& schedule) {
            const VmoDegreeReport rep = vmo_degree(f, d, to_vec(p), schedule);
            py::dict out;
            out["stabilized"] = rep.stabilized;
            out["value"] = rep.value;
            out["margin_d0"] = rep.margin_d0;
            py::list degs;
            for (const auto& dd : rep.degrees) {
                if (dd)
                    degs.append(*dd);
                else
                    degs.append(py::none());
            }
            out["degrees"] = degs;
            return out;
        },
        py::arg("map"), py::arg("domain"), py::arg("p"), py::arg("schedule"));
    m.def(
        "cov_check",
        [](const MapField& f, const Domain& d, const std::vector<double>& p, double bump,
           const std::vector<double>& schedule) {
            const CovCheckReport rep =
                vmo_change_of_variables_check(f, d, to_vec(p), bump, schedule);
            py::dict out;
            out["lhs"] = rep.lhs;
            out["rhs"] = rep.rhs;
            out["residual"] = rep.residual;
            out["degree"] = rep.degree;
            out["stabilized"] = rep.stabilized;
            return out;
        },
        py::arg("map"), py::arg("domain"), py::arg("p"), py::arg("bump_radius"),
        py::arg("schedule"));

    m.def(
        "elastic_energy",
        [](const MapField& f, const Domain& d, const std::string& theta) {
            EnergySpec spec;
            spec.theta = theta == "log" ? BarrierKind::LogBarrier : BarrierKind::None;
            spec.exponent = d.dimension();
            const EnergyResult res = elastic_energy(f, d, spec);
            py::dict out;
            out["infinite"] = res.infinite;
            out["value"] = res.value;
            out["stretch"] = res.stretch_term;
            out["barrier"] = res.barrier_term;
            return out;
        },
        py::arg("map"), py::arg("domain"), py::arg("theta") = "log");
    m.def(
        "immersion_energy",
        [](const std::string& surface, const Domain& d) {
            const EnergyResult res = immersion_energy(surface_preset(surface), d);
            py::dict out;
            out["value"] = res.value;
            out["stretch"] = res.stretch_term;
            out["bending"] = res.barrier_term;
            return out;
        },
        py::arg("surface"), py::arg("domain"));
    m.def(
        "tilde_map",
        [](const std::string& surface, double d) { return tilde_F(surface_preset(surface), d); },
        py::arg("surface"), py::arg("thickness"));

    m.def("save_grid_map", &save_grid_map, py::arg("map"), py::arg("path"));
    m.def("load_grid_map", &load_grid_map, py::arg("path"));
    m.def(
        "sample_to_grid",
        [](const MapField& f, const Domain& d, int order) {
            return MapField::sample_to_grid(d, f.target_dim(), order, f.name() + "_grid",
                                            [&f](const Vec& x) { return f(x); });
        },
        py::arg("map"), py::arg("domain"), py::arg("order") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            try {
                return run(parse_config(args));
            } catch (const UsageError&) {
                return 2;
            }
        },
        py::arg("args"), "Run a CLI invocation in-process; returns the exit code");
    m.def("set_jobs", &set_jobs);
}
