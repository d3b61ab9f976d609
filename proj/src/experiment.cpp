// Copyright 2026 The qlgasim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qlga/experiment.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "qlga/analysis.hpp"

namespace qlga {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrapped(double x, double centre, double period) {
    double dx = std::fmod(x - centre, period);
    if (dx < -period / 2) {
        dx += period;
    } else if (dx >= period / 2) {
        dx -= period;
    }
    return dx;
}

double unit_draw(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Json config_json(const ExperimentConfig &config) {
    Json out = Json::object();
    for (const auto &[path, value] : config_entries(config)) {
        const auto dot = path.find('.');
        out[path.substr(0, dot)][path.substr(dot + 1)] = value;
    }
    return out;
}

Json document(const ExperimentConfig &config) {
    Json doc;
    doc["artifact"] = "qlgasim";
    doc["version"] = std::string(kVersion);
    doc["experiment"] = std::string(to_string(config.kind));
    doc["config"] = config_json(config);
    return doc;
}

Json finite_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

std::string csv(std::initializer_list<std::string> cells) {
    std::string line;
    for (const auto &c : cells) {
        line += (line.empty() ? "" : ",") + c;
    }
    return line + "\n";
}

std::string f17(double v) { return format_double(v); }

class Artifacts {
  public:
    explicit Artifacts(const ExperimentConfig &config) : config_(config) {}

    void write(const std::string &suffix, const std::string &content) {
        const auto path = std::filesystem::path(config_.directory) / (config_.prefix + "_" + suffix);
        write_atomic(path, content);
        files_.push_back(path);
    }
    void write_json(const std::string &suffix, const Json &doc) { write(suffix, doc.dump(2) + "\n"); }

    std::vector<std::filesystem::path> take() { return std::move(files_); }

  private:
    const ExperimentConfig &config_;
    std::vector<std::filesystem::path> files_;
};

std::string trace_csv(const std::vector<TraceRow> &trace, const ExperimentConfig &config) {
    std::string out = provenance_header(config);
    std::string header = "step,time,norm,particles,centroid,width";
    if (config.record_density && !trace.empty()) {
        for (std::size_t q = 0; q < trace.front().density.size(); ++q) {
            header += ",rho_" + std::to_string(q);
        }
    }
    out += header + "\n";
    for (const auto &row : trace) {
        std::string line = std::to_string(row.step) + "," + f17(row.time) + "," + f17(row.norm) +
                           "," + std::to_string(row.particles) + "," + f17(row.centroid) + "," +
                           f17(row.width);
        for (double rho : row.density) {
            line += "," + f17(rho);
        }
        out += line + "\n";
    }
    return out;
}

Json trace_row_json(const TraceRow &row) {
    return Json{{"step", row.step},       {"time", row.time},         {"norm", row.norm},
                {"particles", row.particles}, {"centroid", row.centroid}, {"width", row.width}};
}

std::vector<QbitIndex> ones(const Bitstring &bits) {
    std::vector<QbitIndex> occ;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            occ.push_back(static_cast<QbitIndex>(q));
        }
    }
    return occ;
}

Json sample_json(const SectorState &state, const ExperimentConfig &config) {
    const auto samples = sample_measurements(state, config.seed, config.samples);
    std::map<std::string, std::size_t> counts;
    for (const auto &s : samples) {
        std::string key;
        for (QbitIndex q : ones(s)) {
            key += (key.empty() ? "" : " ") + std::to_string(q);
        }
        ++counts[key];
    }
    Json hist = Json::object();
    for (const auto &[key, n] : counts) {
        hist[key] = n;
    }
    return Json{{"seed", config.seed}, {"count", config.samples}, {"occupied_counts", hist}};
}

void run_dynamics(const ExperimentConfig &config, Artifacts &out) {
    const RunConfig run_config = to_run_config(config);
    SectorState final_state(1, 0, config.statistics);
    std::vector<TraceRow> trace;
    if (config.representation == Representation::dense) {
        auto result = run_dense(run_config);
        const std::size_t n = prepare_initial(run_config).particles();
        final_state = dense_to_sector(result.state, n, config.drift_tol);
        trace = std::move(result.trace);
    } else {
        auto result = run(run_config);
        final_state = std::move(result.state);
        trace = std::move(result.trace);
    }
    out.write("trace.csv", trace_csv(trace, config));
    out.write("state.csv", render_state_snapshot(final_state, run_config.lattice, config));

    Json doc = document(config);
    doc["final"] = trace_row_json(trace.back());
    doc["norm_drift"] = std::abs(trace.back().norm - 1.0);
    if (config.samples > 0) {
        doc["samples"] = sample_json(final_state, config);
    }
    out.write_json("summary.json", doc);
}

void run_dispersion(const ExperimentConfig &config, Artifacts &out) {
    const LatticeSpec lattice(config.dimension, config.sites, config.epsilon, config.mode);
    DispersionResult result;
    if (config.mode == LatticeMode::brick1d) {
        result = measure_dispersion(KineticParams{config.a, config.b}, lattice, config.k_list,
                                    config.dispersion_steps);
    } else {
        const CollisionSpec spec{config.mu, config.nu, config.lambda, config.phi_onsite,
                                 config.statistics};
        result = measure_dispersion(spec, lattice, config.k_list, config.dispersion_steps);
    }
    std::string table = provenance_header(config);
    table += "k,kappa,omega_measured,omega_model,residual\n";
    for (const auto &row : result.rows) {
        table += csv({std::to_string(row.k), f17(row.kappa), f17(row.omega_measured),
                      f17(row.omega_model), f17(row.residual)});
    }
    out.write("dispersion.csv", table);

    Json doc = document(config);
    doc["fitted_mass"] = finite_or_null(result.mass);
    doc["target_mass"] = finite_or_null(result.target_mass);
    doc["rel_error"] = finite_or_null(result.rel_error);
    doc["coefficient"] = result.coefficient;
    doc["fit_residual"] = result.fit_residual;
    doc["eigen_defect"] = result.eigen_defect;
    out.write_json("dispersion.json", doc);
}

void run_converge(const ExperimentConfig &config, Artifacts &out) {
    ConvergenceSetup setup;
    setup.params = KineticParams{config.a, config.b};
    setup.length = config.converge_length;
    setup.base_sites = config.converge_base_sites;
    setup.levels = config.converge_levels;
    setup.time = config.converge_time;
    setup.x0 = config.converge_x0;
    setup.sigma = config.converge_sigma;
    setup.k0 = config.converge_k0;
    setup.fine_factor = config.converge_fine_factor;
    setup.oracle_dt = config.converge_oracle_dt;
    if (config.converge_well_depth != 0.0) {
        const double depth = config.converge_well_depth;
        const double length = config.converge_length;
        setup.potential = [depth, length](double x) {
            return depth * (1.0 - std::cos(kTwoPi * (x - length / 2) / length));
        };
    }
    const ConvergenceResult result = convergence_study(setup);

    std::string table = provenance_header(config);
    table += "epsilon,sites,passes,error\n";
    for (const auto &row : result.rows) {
        table += csv({f17(row.epsilon), std::to_string(row.sites), std::to_string(row.passes),
                      f17(row.error)});
    }
    out.write("convergence.csv", table);

    Json doc = document(config);
    doc["order"] = result.order;
    doc["oracle_error"] = result.oracle_error;
    doc["oracle_norm_drift"] = result.oracle_norm_drift;
    doc["oracle_resolved"] = result.oracle_resolved;
    out.write_json("convergence.json", doc);
}

bool run_oracle_check(const ExperimentConfig &config, Artifacts &out) {
    const double deviation = dense_vs_sector_check(to_run_config(config));
    const bool pass = deviation <= config.algebraic_tol;
    Json doc = document(config);
    doc["max_deviation"] = deviation;
    doc["tolerance"] = config.algebraic_tol;
    doc["pass"] = pass;
    out.write_json("oracle_check.json", doc);
    return pass;
}

void run_gate_count(const ExperimentConfig &config, Artifacts &out) {
    const LatticeSpec lattice(config.dimension, config.sites, config.epsilon, config.mode);
    const GateCount g = gate_count(lattice, config.gate_particles);
    Json doc = document(config);
    doc["d"] = g.d;
    doc["l"] = g.l;
    doc["particles"] = g.particles;
    doc["num_qbits"] = g.num_qbits;
    doc["all_pairs_estimate"] = g.total_estimate;
    doc["exact"] = Json{{"propagation", g.propagation_exact},
                        {"collision", g.collision_exact},
                        {"interaction", g.interaction_exact},
                        {"external", g.external_exact}};
    doc["estimates"] = Json{{"propagation", g.propagation_estimate},
                            {"collision", g.collision_estimate},
                            {"interaction", g.interaction_estimate},
                            {"total", g.total_estimate}};
    doc["classical_cost"] = finite_or_null(g.classical_cost);
    doc["log10_classical_cost"] = g.log10_classical_cost;
    out.write_json("gate_count.json", doc);
}

void run_m_inverse(const ExperimentConfig &config, Artifacts &out) {
    std::string table = provenance_header(config);
    table += "sites,density,nonzero,unitary,unitarity_defect,crosscheck,min_magnitude,max_magnitude\n";
    std::string hist = provenance_header(config);
    hist += "sites,log10_bin,count\n";
    Json doc = document(config);
    Json reports = Json::array();
    for (int l : config.m_sites) {
        const MInverseReport r = nonlocal_m_density(config.a, config.b, l, config.m_threshold);
        table += csv({std::to_string(r.sites), f17(r.density), std::to_string(r.nonzero),
                      r.unitary ? "true" : "false", f17(r.unitarity_defect), f17(r.crosscheck),
                      f17(r.min_magnitude), f17(r.max_magnitude)});
        for (std::size_t b = 0; b < r.histogram.size(); ++b) {
            hist += csv({std::to_string(r.sites), std::to_string(r.bin_floor + static_cast<int>(b)),
                         std::to_string(r.histogram[b])});
        }
        reports.push_back(Json{{"sites", r.sites},
                               {"density", r.density},
                               {"nonzero", r.nonzero},
                               {"unitary", r.unitary},
                               {"unitarity_defect", r.unitarity_defect},
                               {"crosscheck", r.crosscheck}});
    }
    doc["reports"] = reports;
    out.write("m_inverse.csv", table);
    out.write("m_inverse_histogram.csv", hist);
    out.write_json("m_inverse.json", doc);
}

} // namespace

std::string provenance_header(const ExperimentConfig &config) {
    std::string out = "# qlgasim " + std::string(kVersion) + "\n";
    for (const auto &[path, value] : config_entries(config)) {
        out += "# " + path + " = " + value + "\n";
    }
    return out;
}

std::string render_state_snapshot(const SectorState &state, const LatticeSpec &lattice,
                                  const ExperimentConfig &config) {
    std::string out = provenance_header(config);
    out += "# num_qbits = " + std::to_string(state.num_qbits()) + "\n";
    out += "# particles = " + std::to_string(state.particles()) + "\n";
    out += "# statistics = " + std::string(to_string(state.statistics())) + "\n";
    out += "# lattice = d=" + std::to_string(lattice.dimension()) +
           " l=" + std::to_string(lattice.side()) + " epsilon=" + f17(lattice.epsilon()) +
           " mode=" + std::string(to_string(lattice.mode())) + "\n";
    out += "occupied,re,im\n";
    state.for_each([&](std::span<const QbitIndex> occ, cplx amp) {
        std::string key;
        for (QbitIndex q : occ) {
            key += (key.empty() ? "" : " ") + std::to_string(q);
        }
        out += key + "," + f17(amp.real()) + "," + f17(amp.imag()) + "\n";
    });
    return out;
}

Potentials build_potentials(const ExperimentConfig &config, const LatticeSpec &lattice) {
    Potentials pots;
    pots.cadence = config.pair_cadence;
    const std::size_t sites = lattice.num_sites();
    const int d = lattice.dimension();
    const double period = lattice.side() * lattice.epsilon();

    if (config.external != ExternalShape::none) {
        std::vector<double> amplitude;
        std::vector<double> phase;
        if (config.external == ExternalShape::random) {
            std::mt19937_64 rng(config.seed);
            for (int k = 0; k < d * config.external_modes; ++k) {
                amplitude.push_back(2.0 * unit_draw(rng) - 1.0);
                phase.push_back(kTwoPi * unit_draw(rng));
            }
        }
        PotentialField field;
        field.values.resize(sites);
        for (std::size_t s = 0; s < sites; ++s) {
            double u = 0.0;
            for (int axis = 0; axis < d; ++axis) {
                const double x = lattice.position(s, axis);
                switch (config.external) {
                case ExternalShape::harmonic: {
                    const double dx = wrapped(x, config.external_center, period);
                    u += 0.5 * dx * dx;
                    break;
                }
                case ExternalShape::well:
                    u += 1.0 - std::cos(kTwoPi * (x - config.external_center) / period);
                    break;
                case ExternalShape::random:
                    for (int m = 1; m <= config.external_modes; ++m) {
                        const auto idx = static_cast<std::size_t>(axis * config.external_modes + m - 1);
                        u += amplitude[idx] / m * std::cos(kTwoPi * m * x / period + phase[idx]);
                    }
                    break;
                case ExternalShape::none:
                    break;
                }
            }
            field.values[s] = config.external_strength * u;
        }
        pots.external = std::move(field);
    }

    if (config.pair != PairShape::none) {
        std::vector<double> table(sites * sites, 0.0);
        for (std::size_t x = 0; x < sites; ++x) {
            for (std::size_t y = 0; y < sites; ++y) {
                if (config.pair == PairShape::contact) {
                    table[x * sites + y] = x == y ? config.pair_strength : 0.0;
                    continue;
                }
                double r2 = 0.0;
                for (int axis = 0; axis < d; ++axis) {
                    const double dx =
                        wrapped(lattice.position(x, axis), lattice.position(y, axis), period);
                    r2 += dx * dx;
                }
                table[x * sites + y] =
                    config.pair_strength * std::exp(-r2 / (2.0 * config.pair_range * config.pair_range));
            }
        }
        pots.pair.emplace(sites, std::move(table));
    }
    return pots;
}

RunConfig to_run_config(const ExperimentConfig &config) {
    RunConfig rc;
    rc.lattice = LatticeSpec(config.dimension, config.sites, config.epsilon, config.mode);
    rc.kinetic = KineticParams{config.a, config.b};
    rc.phi = config.phi;
    rc.collision = CollisionSpec{config.mu, config.nu, config.lambda, config.phi_onsite,
                                 config.statistics};
    rc.statistics = config.statistics;
    rc.potentials = build_potentials(config, rc.lattice);
    rc.steps = config.steps;
    rc.initial.kind = config.initial;
    rc.initial.occupied = config.occupied;
    rc.initial.x0 = config.x0;
    rc.initial.sigma = config.sigma;
    rc.initial.k0 = config.k0;
    rc.initial.x1 = config.x1;
    rc.initial.k1 = config.k1;
    rc.observe_every = config.observe_every;
    rc.record_density = config.record_density;
    rc.norm_tolerance = config.drift_tol;
    return rc;
}

void write_atomic(const std::filesystem::path &path, const std::string &content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
        }
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        file.write(content.data(), static_cast<std::streamsize>(content.size()));
        file.flush();
        if (!file) {
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

ExperimentOutcome run_experiment(const ExperimentConfig &config) {
    ExperimentOutcome outcome;
    Artifacts out(config);
    try {
        switch (config.kind) {
        case ExperimentKind::run_brick:
        case ExperimentKind::run_qlga:
            run_dynamics(config, out);
            break;
        case ExperimentKind::dispersion:
            run_dispersion(config, out);
            break;
        case ExperimentKind::converge:
            run_converge(config, out);
            break;
        case ExperimentKind::oracle_check:
            if (!run_oracle_check(config, out)) {
                outcome.exit_code = exit_code::invariant_breach;
                outcome.message = "dense and sector representations disagree";
            }
            break;
        case ExperimentKind::gate_count:
            run_gate_count(config, out);
            break;
        case ExperimentKind::m_inverse:
            run_m_inverse(config, out);
            break;
        }
    } catch (const IoError &e) {
        outcome.exit_code = exit_code::io_error;
        outcome.message = e.what();
    } catch (const std::filesystem::filesystem_error &e) {
        outcome.exit_code = exit_code::io_error;
        outcome.message = e.what();
    } catch (const ConfigError &e) {
        outcome.exit_code = exit_code::config_error;
        outcome.message = e.what();
    } catch (const AnalysisError &e) {
        // Requests the analysis cannot answer, such as ambiguous phases.
        outcome.exit_code = exit_code::config_error;
        outcome.message = e.what();
    } catch (const std::invalid_argument &e) {
        outcome.exit_code = exit_code::config_error;
        outcome.message = e.what();
    } catch (const std::exception &e) {
        outcome.exit_code = exit_code::invariant_breach;
        outcome.message = e.what();
    }
    outcome.files = out.take();
    return outcome;
}

} // namespace qlga
