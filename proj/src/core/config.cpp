// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The emschart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "config.hpp"
#include "io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace emschart
{
    using json = nlohmann::ordered_json;

    ArrayGeometry PlanarArraySpec::build(double wavelength) const
    {
        const Vec3 b = boresight.normalized();
        const Vec3 v = vertical_axis.normalized();
        const Vec3 h = v.cross(b);
        if (h.norm() < 1e-9)
            throw std::invalid_argument("array: boresight must not be parallel to the vertical axis");
        const double d = spacing_wavelengths * wavelength;
        return planar_array(center, h.normalized(), v, cols, rows, d, d, pattern_exponent);
    }

    namespace
    {
        [[noreturn]] void fail(const std::string &path, const std::string &what) { throw std::invalid_argument("config: " + path + ": " + what); }

        std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

        const json *child(const json &obj, const std::string &key, const std::string &path)
        {
            if (!obj.is_object())
                fail(path, "expected an object");
            const auto it = obj.find(key);
            return it == obj.end() ? nullptr : &*it;
        }

        double get_double(const json &obj, const std::string &key, const std::string &path, double fallback)
        {
            const json *v = child(obj, key, path);
            if (!v)
                return fallback;
            if (!v->is_number())
                fail(join(path, key), "expected a number");
            return v->get<double>();
        }

        std::int64_t get_int(const json &obj, const std::string &key, const std::string &path, std::int64_t fallback)
        {
            const json *v = child(obj, key, path);
            if (!v)
                return fallback;
            if (!v->is_number_integer())
                fail(join(path, key), "expected an integer");
            return v->get<std::int64_t>();
        }

        std::uint64_t get_u64(const json &obj, const std::string &key, const std::string &path, std::uint64_t fallback)
        {
            const json *v = child(obj, key, path);
            if (!v)
                return fallback;
            if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
                fail(join(path, key), "expected a non-negative integer");
            return v->get<std::uint64_t>();
        }

        bool get_bool(const json &obj, const std::string &key, const std::string &path, bool fallback)
        {
            const json *v = child(obj, key, path);
            if (!v)
                return fallback;
            if (!v->is_boolean())
                fail(join(path, key), "expected true or false");
            return v->get<bool>();
        }

        std::string get_string(const json &obj, const std::string &key, const std::string &path, const std::string &fallback)
        {
            const json *v = child(obj, key, path);
            if (!v)
                return fallback;
            if (!v->is_string())
                fail(join(path, key), "expected a string");
            return v->get<std::string>();
        }

        template <int N>
        Eigen::Matrix<double, N, 1> get_vec(const json &obj, const std::string &key, const std::string &path, const Eigen::Matrix<double, N, 1> &fallback)
        {
            const json *v = child(obj, key, path);
            if (!v)
                return fallback;
            if (!v->is_array() || v->size() != N)
                fail(join(path, key), "expected an array of " + std::to_string(N) + " numbers");
            Eigen::Matrix<double, N, 1> out;
            for (int i = 0; i < N; ++i)
            {
                if (!(*v)[static_cast<std::size_t>(i)].is_number())
                    fail(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
                out[i] = (*v)[static_cast<std::size_t>(i)].get<double>();
            }
            return out;
        }

        template <class T>
        json vec_json(const T &v)
        {
            json a = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                a.push_back(v[i]);
            return a;
        }

        const json &require_array(const json *v, const std::string &path)
        {
            if (!v->is_array())
                fail(path, "expected an array");
            return *v;
        }

        void check_keys(const json &obj, const std::string &path, std::initializer_list<const char *> known)
        {
            if (!obj.is_object())
                fail(path.empty() ? "<root>" : path, "expected an object");
            for (const auto &[k, _] : obj.items())
            {
                bool ok = false;
                for (const char *name : known)
                    ok |= k == name;
                if (!ok)
                    fail(join(path, k), "unknown field");
            }
        }

        PlanarArraySpec parse_array(const json &o, const std::string &path, const PlanarArraySpec &d)
        {
            check_keys(o, path, {"center_m", "boresight", "vertical_axis", "cols", "rows", "spacing_wavelengths", "pattern_exponent"});
            PlanarArraySpec a;
            a.center = get_vec<3>(o, "center_m", path, d.center);
            a.boresight = get_vec<3>(o, "boresight", path, d.boresight);
            a.vertical_axis = get_vec<3>(o, "vertical_axis", path, d.vertical_axis);
            a.cols = static_cast<int>(get_int(o, "cols", path, d.cols));
            a.rows = static_cast<int>(get_int(o, "rows", path, d.rows));
            a.spacing_wavelengths = get_double(o, "spacing_wavelengths", path, d.spacing_wavelengths);
            a.pattern_exponent = get_double(o, "pattern_exponent", path, d.pattern_exponent);
            return a;
        }

        json array_json(const PlanarArraySpec &a)
        {
            json o;
            o["center_m"] = vec_json(a.center);
            o["boresight"] = vec_json(a.boresight);
            o["vertical_axis"] = vec_json(a.vertical_axis);
            o["cols"] = a.cols;
            o["rows"] = a.rows;
            o["spacing_wavelengths"] = a.spacing_wavelengths;
            o["pattern_exponent"] = a.pattern_exponent;
            return o;
        }

        PlanarArraySpec default_bs()
        {
            PlanarArraySpec a;
            a.cols = 8;
            a.rows = 4;
            a.spacing_wavelengths = 0.5;
            a.center = Vec3(0.0, 0.0, 8.5);
            return a;
        }

        PlanarArraySpec default_panel()
        {
            PlanarArraySpec a;
            a.cols = 60;
            a.rows = 60;
            a.spacing_wavelengths = 0.25;
            a.center = Vec3(0.0, 0.0, 5.5);
            return a;
        }

        void check_positive(const std::string &path, double v)
        {
            if (!(v > 0.0) || !std::isfinite(v))
                fail(path, "must be positive and finite");
        }
    } // namespace

    void ExperimentConfig::validate() const
    {
        check_positive("scene.carrier_frequency_hz", scene.carrier_frequency_hz);
        if (!(scene.reflection_coefficient >= 0.0 && scene.reflection_coefficient <= 1.0))
            fail("scene.reflection_coefficient", "must lie in [0, 1]");
        if (scene.max_reflection_order < 0 || scene.max_reflection_order > 2)
            fail("scene.max_reflection_order", "must be 0, 1 or 2");
        auto check_array = [](const PlanarArraySpec &a, const std::string &path) {
            if (a.cols < 1 || a.rows < 1)
                fail(path + ".cols", "array needs at least one row and one column");
            check_positive(path + ".spacing_wavelengths", a.spacing_wavelengths);
            if (a.pattern_exponent < 0.0)
                fail(path + ".pattern_exponent", "must be non-negative");
            if (a.boresight.norm() == 0.0 || a.vertical_axis.norm() == 0.0)
                fail(path, "axes must be non-zero");
            if (a.boresight.normalized().cross(a.vertical_axis.normalized()).norm() < 1e-9)
                fail(path + ".boresight", "must not be parallel to vertical_axis");
        };
        check_array(scene.bs, "scene.bs");
        for (std::size_t j = 0; j < scene.ems_panels.size(); ++j)
            check_array(scene.ems_panels[j], "scene.ems_panels[" + std::to_string(j) + "]");
        for (std::size_t i = 0; i < scene.obstacles.size(); ++i)
        {
            const auto &b = scene.obstacles[i];
            if (!(b.min_corner.array() < b.max_corner.array()).all())
                fail("scene.obstacles[" + std::to_string(i) + "]", "min_m must be below max_m in every coordinate");
        }
        try
        {
            radio.validate();
        }
        catch (const std::exception &e)
        {
            fail("radio", e.what());
        }
        if (!(grid.region_min.array() < grid.region_max.array()).all())
            fail("grid.region_min_m", "must be below region_max_m");
        if (grid.cols < 1 || grid.rows < 1)
            fail("grid.cols", "lattice needs at least one row and one column");
        if (!(anchors.supervision > 0.0 && anchors.supervision < 1.0))
            fail("anchors.supervision", "must lie in (0, 1)");
        if (ems.codebook_size < 1 || ems.codebook_size % 2 == 0)
            fail("ems.codebook_size", "must be a positive odd number");
        if (ems.search != "exhaustive" && ems.search != "greedy")
            fail("ems.search", "must be \"exhaustive\" or \"greedy\"");
        if (ems.sweeps < 1)
            fail("ems.sweeps", "must be at least 1");
        if (!(run.alpha > 0.0 && run.alpha < 1.0))
            fail("run.alpha", "must lie in (0, 1)");
        if (trajectory.spacing_m <= 0.0)
            fail("trajectory.spacing_m", "must be positive");
        if (trajectory.threshold_m < 0.0)
            fail("trajectory.threshold_m", "must be non-negative");
        const auto &t = method.settings.tsne;
        if (!(t.perplexity > 1.0))
            fail("method.tsne.perplexity", "must exceed 1");
        if (t.iterations < 0 || t.exaggeration_iters < 0 || t.exaggeration_iters > t.iterations)
            fail("method.tsne.exaggeration_iters", "must lie in [0, iterations]");
        if (!(t.learning_rate > 0.0))
            fail("method.tsne.learning_rate", "must be positive");
        if (!(t.momentum >= 0.0 && t.momentum < 1.0))
            fail("method.tsne.momentum", "must lie in [0, 1)");
        try
        {
            method.settings.ae.validate();
        }
        catch (const std::exception &e)
        {
            fail("method.ae", e.what());
        }
        const auto &top = method.settings.topology;
        if (top.hidden_widths.size() != top.hidden_activations.size())
            fail("method.ae.hidden_activations", "need one activation per hidden width");
        for (int w : top.hidden_widths)
            if (w < 1)
                fail("method.ae.hidden_widths", "widths must be positive");
    }

    ExperimentConfig parse_config(const std::string &text)
    {
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const std::exception &e)
        {
            throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
        }
        check_keys(root, "", {"scene", "radio", "grid", "anchors", "method", "ems", "run", "trajectory"});
        ExperimentConfig c;
        static const json empty = json::object();
        auto block = [&](const char *key) -> const json & {
            const json *v = child(root, key, "");
            return v ? *v : empty;
        };

        {
            const json &s = block("scene");
            check_keys(s, "scene", {"carrier_frequency_hz", "reflection_coefficient", "max_reflection_order", "bs", "ems_panels", "obstacles"});
            c.scene.carrier_frequency_hz = get_double(s, "carrier_frequency_hz", "scene", c.scene.carrier_frequency_hz);
            c.scene.reflection_coefficient = get_double(s, "reflection_coefficient", "scene", c.scene.reflection_coefficient);
            c.scene.max_reflection_order = static_cast<int>(get_int(s, "max_reflection_order", "scene", c.scene.max_reflection_order));
            const json *bs = child(s, "bs", "scene");
            c.scene.bs = bs ? parse_array(*bs, "scene.bs", default_bs()) : default_bs();
            if (const json *panels = child(s, "ems_panels", "scene"))
            {
                const json &arr = require_array(panels, "scene.ems_panels");
                for (std::size_t j = 0; j < arr.size(); ++j)
                    c.scene.ems_panels.push_back(parse_array(arr[j], "scene.ems_panels[" + std::to_string(j) + "]", default_panel()));
            }
            if (const json *obs = child(s, "obstacles", "scene"))
            {
                const json &arr = require_array(obs, "scene.obstacles");
                for (std::size_t i = 0; i < arr.size(); ++i)
                {
                    const std::string p = "scene.obstacles[" + std::to_string(i) + "]";
                    check_keys(arr[i], p, {"min_m", "max_m"});
                    if (!child(arr[i], "min_m", p) || !child(arr[i], "max_m", p))
                        fail(p, "needs min_m and max_m");
                    c.scene.obstacles.push_back({get_vec<3>(arr[i], "min_m", p, Vec3::Zero()), get_vec<3>(arr[i], "max_m", p, Vec3::Zero())});
                }
            }
        }
        {
            const json &r = block("radio");
            check_keys(r, "radio", {"tx_power_dbm", "noise_power_dbm", "bandwidth_hz", "snapshots"});
            c.radio.tx_power_dbm = get_double(r, "tx_power_dbm", "radio", c.radio.tx_power_dbm);
            c.radio.noise_power_dbm = get_double(r, "noise_power_dbm", "radio", c.radio.noise_power_dbm);
            c.radio.bandwidth_hz = get_double(r, "bandwidth_hz", "radio", c.radio.bandwidth_hz);
            c.radio.snapshots = static_cast<int>(get_int(r, "snapshots", "radio", c.radio.snapshots));
        }
        {
            const json &g = block("grid");
            check_keys(g, "grid", {"region_min_m", "region_max_m", "cols", "rows", "ue_height_m"});
            c.grid.region_min = get_vec<2>(g, "region_min_m", "grid", c.grid.region_min);
            c.grid.region_max = get_vec<2>(g, "region_max_m", "grid", c.grid.region_max);
            c.grid.cols = static_cast<int>(get_int(g, "cols", "grid", c.grid.cols));
            c.grid.rows = static_cast<int>(get_int(g, "rows", "grid", c.grid.rows));
            c.grid.ue_height_m = get_double(g, "ue_height_m", "grid", c.grid.ue_height_m);
        }
        {
            const json &a = block("anchors");
            check_keys(a, "anchors", {"supervision"});
            c.anchors.supervision = get_double(a, "supervision", "anchors", c.anchors.supervision);
        }
        {
            const json &m = block("method");
            check_keys(m, "method", {"name", "kappa", "tsne", "ae"});
            try
            {
                c.method.name = method_from_string(get_string(m, "name", "method", "tsne"));
            }
            catch (const std::invalid_argument &e)
            {
                fail("method.name", e.what());
            }
            auto &st = c.method.settings;
            st.kappa = static_cast<int>(get_int(m, "kappa", "method", st.kappa));
            const json *t = child(m, "tsne", "method");
            if (t)
            {
                check_keys(*t, "method.tsne", {"perplexity", "iterations", "learning_rate", "momentum", "exaggeration", "exaggeration_iters", "init_scale_m",
                                               "monotone_fraction"});
                auto &ts = st.tsne;
                ts.perplexity = get_double(*t, "perplexity", "method.tsne", ts.perplexity);
                ts.iterations = static_cast<int>(get_int(*t, "iterations", "method.tsne", ts.iterations));
                ts.learning_rate = get_double(*t, "learning_rate", "method.tsne", ts.learning_rate);
                ts.momentum = get_double(*t, "momentum", "method.tsne", ts.momentum);
                ts.exaggeration = get_double(*t, "exaggeration", "method.tsne", ts.exaggeration);
                ts.exaggeration_iters = static_cast<int>(get_int(*t, "exaggeration_iters", "method.tsne", ts.exaggeration_iters));
                ts.init_scale = get_double(*t, "init_scale_m", "method.tsne", ts.init_scale);
                ts.monotone_fraction = get_double(*t, "monotone_fraction", "method.tsne", ts.monotone_fraction);
            }
            const json *a = child(m, "ae", "method");
            if (a)
            {
                check_keys(*a, "method.ae", {"alpha", "beta", "gamma", "eta", "learning_rate", "batch_size", "epochs", "normalize_labels", "hidden_widths",
                                             "hidden_activations"});
                auto &ae = st.ae;
                ae.alpha = get_double(*a, "alpha", "method.ae", ae.alpha);
                ae.beta = get_double(*a, "beta", "method.ae", ae.beta);
                ae.gamma = get_double(*a, "gamma", "method.ae", ae.gamma);
                ae.eta = get_double(*a, "eta", "method.ae", ae.eta);
                ae.learning_rate = get_double(*a, "learning_rate", "method.ae", ae.learning_rate);
                ae.batch_size = static_cast<int>(get_int(*a, "batch_size", "method.ae", ae.batch_size));
                ae.epochs = static_cast<int>(get_int(*a, "epochs", "method.ae", ae.epochs));
                ae.normalize_labels = get_bool(*a, "normalize_labels", "method.ae", ae.normalize_labels);
                if (const json *w = child(*a, "hidden_widths", "method.ae"))
                {
                    st.topology.hidden_widths.clear();
                    for (const auto &x : require_array(w, "method.ae.hidden_widths"))
                    {
                        if (!x.is_number_integer())
                            fail("method.ae.hidden_widths", "expected integers");
                        st.topology.hidden_widths.push_back(x.get<int>());
                    }
                }
                if (const json *acts = child(*a, "hidden_activations", "method.ae"))
                {
                    st.topology.hidden_activations.clear();
                    for (const auto &x : require_array(acts, "method.ae.hidden_activations"))
                    {
                        if (!x.is_string())
                            fail("method.ae.hidden_activations", "expected strings");
                        try
                        {
                            st.topology.hidden_activations.push_back(activation_from_string(x.get<std::string>()));
                        }
                        catch (const std::invalid_argument &e)
                        {
                            fail("method.ae.hidden_activations", e.what());
                        }
                    }
                }
            }
        }
        {
            const json &e = block("ems");
            check_keys(e, "ems", {"codebook_size", "search", "sweeps", "budget"});
            c.ems.codebook_size = static_cast<int>(get_int(e, "codebook_size", "ems", c.ems.codebook_size));
            c.ems.search = get_string(e, "search", "ems", c.ems.search);
            c.ems.sweeps = static_cast<int>(get_int(e, "sweeps", "ems", c.ems.sweeps));
            c.ems.budget = get_u64(e, "budget", "ems", c.ems.budget);
        }
        {
            const json &r = block("run");
            check_keys(r, "run", {"alpha", "metric", "seed", "threads", "output_dir"});
            c.run.alpha = get_double(r, "alpha", "run", c.run.alpha);
            try
            {
                c.run.metric = metric_from_string(get_string(r, "metric", "run", "le"));
            }
            catch (const std::invalid_argument &e)
            {
                fail("run.metric", e.what());
            }
            c.run.seed = get_u64(r, "seed", "run", c.run.seed);
            c.run.threads = static_cast<unsigned>(get_u64(r, "threads", "run", c.run.threads));
            c.run.output_dir = get_string(r, "output_dir", "run", c.run.output_dir);
        }
        {
            const json &t = block("trajectory");
            check_keys(t, "trajectory", {"waypoints_m", "spacing_m", "threshold_m"});
            if (const json *w = child(t, "waypoints_m", "trajectory"))
            {
                const json &arr = require_array(w, "trajectory.waypoints_m");
                for (std::size_t i = 0; i < arr.size(); ++i)
                {
                    const std::string p = "trajectory.waypoints_m[" + std::to_string(i) + "]";
                    if (!arr[i].is_array() || arr[i].size() != 2 || !arr[i][0].is_number() || !arr[i][1].is_number())
                        fail(p, "expected [x, y]");
                    c.trajectory.waypoints.emplace_back(arr[i][0].get<double>(), arr[i][1].get<double>());
                }
            }
            c.trajectory.spacing_m = get_double(t, "spacing_m", "trajectory", c.trajectory.spacing_m);
            c.trajectory.threshold_m = get_double(t, "threshold_m", "trajectory", c.trajectory.threshold_m);
        }
        c.validate();
        return c;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        if (!std::filesystem::exists(path))
            throw std::invalid_argument("config file not found: " + path.string());
        return parse_config(io::read_file(path));
    }

    std::string serialize_config(const ExperimentConfig &c)
    {
        json root;
        json &s = root["scene"];
        s["carrier_frequency_hz"] = c.scene.carrier_frequency_hz;
        s["reflection_coefficient"] = c.scene.reflection_coefficient;
        s["max_reflection_order"] = c.scene.max_reflection_order;
        s["bs"] = array_json(c.scene.bs);
        s["ems_panels"] = json::array();
        for (const auto &p : c.scene.ems_panels)
            s["ems_panels"].push_back(array_json(p));
        s["obstacles"] = json::array();
        for (const auto &b : c.scene.obstacles)
        {
            json o;
            o["min_m"] = vec_json(b.min_corner);
            o["max_m"] = vec_json(b.max_corner);
            s["obstacles"].push_back(o);
        }
        json &r = root["radio"];
        r["tx_power_dbm"] = c.radio.tx_power_dbm;
        r["noise_power_dbm"] = c.radio.noise_power_dbm;
        r["bandwidth_hz"] = c.radio.bandwidth_hz;
        r["snapshots"] = c.radio.snapshots;
        json &g = root["grid"];
        g["region_min_m"] = vec_json(c.grid.region_min);
        g["region_max_m"] = vec_json(c.grid.region_max);
        g["cols"] = c.grid.cols;
        g["rows"] = c.grid.rows;
        g["ue_height_m"] = c.grid.ue_height_m;
        root["anchors"]["supervision"] = c.anchors.supervision;
        json &m = root["method"];
        m["name"] = to_string(c.method.name);
        m["kappa"] = c.method.settings.kappa;
        const auto &ts = c.method.settings.tsne;
        m["tsne"] = {{"perplexity", ts.perplexity},       {"iterations", ts.iterations}, {"learning_rate", ts.learning_rate},
                     {"momentum", ts.momentum},           {"exaggeration", ts.exaggeration}, {"exaggeration_iters", ts.exaggeration_iters},
                     {"init_scale_m", ts.init_scale},     {"monotone_fraction", ts.monotone_fraction}};
        const auto &ae = c.method.settings.ae;
        json acts = json::array();
        for (auto a : c.method.settings.topology.hidden_activations)
            acts.push_back(to_string(a));
        m["ae"] = {{"alpha", ae.alpha},
                   {"beta", ae.beta},
                   {"gamma", ae.gamma},
                   {"eta", ae.eta},
                   {"learning_rate", ae.learning_rate},
                   {"batch_size", ae.batch_size},
                   {"epochs", ae.epochs},
                   {"normalize_labels", ae.normalize_labels},
                   {"hidden_widths", c.method.settings.topology.hidden_widths},
                   {"hidden_activations", acts}};
        json &e = root["ems"];
        e["codebook_size"] = c.ems.codebook_size;
        e["search"] = c.ems.search;
        e["sweeps"] = c.ems.sweeps;
        e["budget"] = c.ems.budget;
        json &rn = root["run"];
        rn["alpha"] = c.run.alpha;
        rn["metric"] = to_string(c.run.metric);
        rn["seed"] = c.run.seed;
        rn["threads"] = c.run.threads;
        rn["output_dir"] = c.run.output_dir;
        json &t = root["trajectory"];
        t["waypoints_m"] = json::array();
        for (const auto &w : c.trajectory.waypoints)
            t["waypoints_m"].push_back(vec_json(w));
        t["spacing_m"] = c.trajectory.spacing_m;
        t["threshold_m"] = c.trajectory.threshold_m;
        return root.dump(2) + "\n";
    }

    SeedStreams derive_seeds(std::uint64_t seed)
    {
        return {mix_seed(seed, 1), mix_seed(seed, 2), mix_seed(seed, 3), mix_seed(seed, 4), mix_seed(seed, 5)};
    }

    BuiltScene build_scene(const ExperimentConfig &cfg)
    {
        cfg.validate();
        BuiltScene out;
        Scene &s = out.scene;
        s.carrier_frequency = cfg.scene.carrier_frequency_hz;
        s.reflection_coefficient = cfg.scene.reflection_coefficient;
        s.max_reflection_order = cfg.scene.max_reflection_order;
        const double lambda = s.wavelength();
        s.bs = cfg.scene.bs.build(lambda);
        for (const auto &p : cfg.scene.ems_panels)
            s.ems_panels.push_back(p.build(lambda));
        s.obstacles = cfg.scene.obstacles;
        const auto &g = cfg.grid;
        const double dx = (g.region_max.x() - g.region_min.x()) / g.cols;
        const double dy = (g.region_max.y() - g.region_min.y()) / g.rows;
        for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c)
            {
                const Vec3 p(g.region_min.x() + (c + 0.5) * dx, g.region_min.y() + (r + 0.5) * dy, g.ue_height_m);
                if (point_inside(p, s.obstacles))
                {
                    ++out.dropped;
                    continue;
                }
                s.test_points.push_back(p);
                out.point_ids.push_back(r * g.cols + c);
            }
        if (point_inside(s.bs.origin, s.obstacles))
            fail("scene.bs.center_m", "lies inside an obstacle");
        for (std::size_t j = 0; j < s.ems_panels.size(); ++j)
            if (point_inside(s.ems_panels[j].origin, s.obstacles))
                fail("scene.ems_panels[" + std::to_string(j) + "].center_m", "lies inside an obstacle");
        return out;
    }

    std::vector<Vec3> trajectory_points(const ExperimentConfig &cfg)
    {
        const auto &w = cfg.trajectory.waypoints;
        if (w.size() < 2)
            throw std::invalid_argument("trajectory: at least two waypoints are required");
        std::vector<Vec3> pts;
        auto push = [&](const Vec2 &p) { pts.emplace_back(p.x(), p.y(), cfg.grid.ue_height_m); };
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
        {
            const Vec2 a = w[i];
            const Vec2 b = w[i + 1];
            const double len = (b - a).norm();
            const int steps = std::max(1, static_cast<int>(std::ceil(len / cfg.trajectory.spacing_m - 1e-9)));
            for (int k = 0; k < steps; ++k)
                push(a + (b - a) * (static_cast<double>(k) / steps));
        }
        push(w.back());
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            const Vec3 &p = pts[i];
            if (p.x() < cfg.grid.region_min.x() || p.x() > cfg.grid.region_max.x() || p.y() < cfg.grid.region_min.y() || p.y() > cfg.grid.region_max.y())
                throw std::invalid_argument("trajectory: point " + std::to_string(i) + " leaves the scene region");
            if (point_inside(p, cfg.scene.obstacles))
                throw std::invalid_argument("trajectory: point " + std::to_string(i) + " lies inside an obstacle");
        }
        return pts;
    }

    ChartSettings chart_settings(const ExperimentConfig &cfg)
    {
        ChartSettings s = cfg.method.settings;
        const SeedStreams seeds = derive_seeds(cfg.run.seed);
        s.tsne.seed = seeds.tsne;
        s.ae.seed = seeds.ae;
        return s;
    }
} // namespace emschart
