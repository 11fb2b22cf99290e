#pragma once

#include "mbinv/blind.hpp"
#include "mbinv/degrade.hpp"
#include "mbinv/error.hpp"
#include "mbinv/estimate.hpp"
#include "mbinv/image.hpp"
#include "mbinv/invariants.hpp"
#include "mbinv/psf.hpp"
#include "mbinv/quality.hpp"
#include "mbinv/report_json.hpp"
#include "mbinv/restore.hpp"
#include "mbinv/spectral.hpp"
#include "mbinv/synth.hpp"
