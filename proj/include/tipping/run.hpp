#pragma once

#include "core/config.hpp"
#include "core/run_result.hpp"
#include "mark0/engine.hpp"
#include "mark1/engine.hpp"

namespace tipping {

inline RunResult run_engine(Engine engine, const SimConfig& cfg) {
    return engine == Engine::mark0 ? mark0::run_mark0(cfg) : mark1::run_mark1(cfg);
}

}  // namespace tipping
