// Copyright 2026 pobstacle developers
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

#include "pobs/pobs.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "pobs/error.hpp"
#include "pobs/pflux.hpp"
#include "pobs/runner.hpp"
#include "pobs/scenario.hpp"
#include "pobs/solver.hpp"

struct pobs_scenario {
  pobs::Scenario sc;
};

struct pobs_run {
  pobs::RunOutput out;
};

struct pobs_result {
  pobs::SolveResult r;
};

namespace {

thread_local std::string g_last_error;

pobs_status to_status(pobs::ErrorCode c) { return static_cast<pobs_status>(static_cast<int>(c)); }

template <class F>
pobs_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const pobs::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return POBS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return POBS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return POBS_ERR_INTERNAL;
  }
}

pobs_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return POBS_ERR_INPUT;
}

template <class Cmd>
pobs_status run_command(const pobs_scenario* sc, const char* out_dir, pobs_run** out, Cmd cmd) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (sc == nullptr) return null_arg("scenario");
  if (out_dir == nullptr) return null_arg("out_dir");
  return guarded([&] {
    auto run = std::make_unique<pobs_run>();
    run->out = cmd(sc->sc, std::filesystem::path(out_dir));
    const pobs_status st = to_status(run->out.status);
    *out = run.release();
    return st;
  });
}

}  // namespace

extern "C" {

const char* pobs_version(void) { return pobs::version_string(); }

const char* pobs_last_error(void) { return g_last_error.c_str(); }

pobs_status pobs_scenario_load(const char* path, pobs_scenario** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (path == nullptr) return null_arg("path");
  return guarded([&] {
    *out = new pobs_scenario{pobs::load_scenario(path)};
    return POBS_OK;
  });
}

pobs_status pobs_scenario_parse(const char* text, pobs_scenario** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (text == nullptr) return null_arg("text");
  return guarded([&] {
    *out = new pobs_scenario{pobs::parse_scenario(text)};
    return POBS_OK;
  });
}

const char* pobs_scenario_name(const pobs_scenario* sc) { return sc ? sc->sc.name.c_str() : ""; }

void pobs_scenario_free(pobs_scenario* sc) { delete sc; }

pobs_status pobs_cmd_solve(const pobs_scenario* sc, const char* out_dir, pobs_run** out) {
  return run_command(sc, out_dir, out, pobs::cmd_solve);
}

pobs_status pobs_cmd_verify(const pobs_scenario* sc, const char* out_dir, pobs_run** out) {
  return run_command(sc, out_dir, out, pobs::cmd_verify);
}

pobs_status pobs_cmd_convergence(const pobs_scenario* sc, const char* out_dir, pobs_run** out) {
  return run_command(sc, out_dir, out, pobs::cmd_convergence);
}

pobs_status pobs_cmd_ineq(long trials, uint64_t seed, int swap_sides, pobs_run** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto run = std::make_unique<pobs_run>();
    run->out = pobs::cmd_ineq(trials, seed, swap_sides != 0);
    const pobs_status st = to_status(run->out.status);
    *out = run.release();
    return st;
  });
}

const char* pobs_run_text(const pobs_run* run) { return run ? run->out.text.c_str() : ""; }

size_t pobs_run_file_count(const pobs_run* run) { return run ? run->out.files.size() : 0; }

const char* pobs_run_file(const pobs_run* run, size_t i) {
  if (run == nullptr || i >= run->out.files.size()) return nullptr;
  return run->out.files[i].c_str();
}

void pobs_run_free(pobs_run* run) { delete run; }

pobs_status pobs_solve(const pobs_scenario* sc, pobs_result** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (sc == nullptr) return null_arg("scenario");
  return guarded([&] {
    const pobs::Grid grid = pobs::scenario_grid(sc->sc);
    const auto obstacle = pobs::make_obstacle(sc->sc.obstacle_id, sc->sc.obstacle_params, grid);
    auto res = std::make_unique<pobs_result>();
    res->r = pobs::solve(grid, *obstacle, pobs::scenario_config(sc->sc));
    const pobs_status st = res->r.converged() ? POBS_OK : POBS_ERR_NONCONVERGED;
    *out = res.release();
    return st;
  });
}

int pobs_result_dim(const pobs_result* r) { return r ? r->r.grid().dim() : 0; }

int pobs_result_nx(const pobs_result* r, int axis) {
  if (r == nullptr || axis < 0 || axis >= r->r.grid().dim()) return 0;
  return r->r.grid().nx(axis);
}

int pobs_result_nt(const pobs_result* r) { return r ? r->r.grid().nt() : 0; }

const double* pobs_result_values(const pobs_result* r) {
  return r ? r->r.u.values().data() : nullptr;
}

size_t pobs_result_size(const pobs_result* r) { return r ? r->r.u.values().size() : 0; }

int pobs_result_converged(const pobs_result* r) { return r && r->r.converged() ? 1 : 0; }

void pobs_result_free(pobs_result* r) { delete r; }

pobs_status pobs_flux(const double* grad, int n, double p, double eps, double* out) {
  if (grad == nullptr || out == nullptr) return null_arg("grad/out");
  return guarded([&] {
    if (n < 1 || n > 2) pobs::throw_input("gradient length must be 1 or 2");
    const pobs::PParams params{p, eps};
    pobs::validate(params);
    pobs::Vec g{grad[0], n == 2 ? grad[1] : 0.0};
    const auto a = pobs::flux_eps(g, params);
    for (int i = 0; i < n; ++i) out[i] = a[static_cast<std::size_t>(i)];
    return POBS_OK;
  });
}

pobs_status pobs_f_map(const double* grad, int n, double p, double* out) {
  if (grad == nullptr || out == nullptr) return null_arg("grad/out");
  return guarded([&] {
    if (n < 1 || n > 2) pobs::throw_input("gradient length must be 1 or 2");
    pobs::validate(pobs::PParams{p, 0.0});
    pobs::Vec g{grad[0], n == 2 ? grad[1] : 0.0};
    const auto f = pobs::f_map(g, p);
    for (int i = 0; i < n; ++i) out[i] = f[static_cast<std::size_t>(i)];
    return POBS_OK;
  });
}

}  // extern "C"
