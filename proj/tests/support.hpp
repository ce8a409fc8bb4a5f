#pragma once

#include <cstdlib>
#include <memory>

#include "aqi/dipole.hpp"
#include "aqi/phasespace.hpp"

namespace support {

// Shared dipole cache named by AQI_TEST_CACHE; none when unset.
inline const aqi::DipoleCache* cache() {
    static const std::unique_ptr<aqi::DipoleCache> c = [] {
        const char* dir = std::getenv("AQI_TEST_CACHE");
        return dir && *dir ? std::make_unique<aqi::DipoleCache>(dir) : nullptr;
    }();
    return c.get();
}

inline aqi::EnsembleOptions options() {
    aqi::EnsembleOptions o;
    o.cache = cache();
    return o;
}

inline aqi::Ensemble ensemble(aqi::DriverConfig c) { return aqi::compute_ensemble(c, options()); }

}  // namespace support
