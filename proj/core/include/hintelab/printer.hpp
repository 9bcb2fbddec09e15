#pragma once

#include <string>

#include "hintelab/env.hpp"
#include "hintelab/meta.hpp"
#include "hintelab/term.hpp"

namespace hintelab {

struct RenderOptions {
  const MetaContext* metas = nullptr;  // for metavariable display names
  bool notations = true;
};

// Deterministic ASCII rendering that the script parser reads back.
std::string render_term(const GlobalEnv& env, const Term& t, const RenderOptions& opts = {});

std::string render_context(const GlobalEnv& env, const LocalContext& ctx, const RenderOptions& opts = {});

}  // namespace hintelab
