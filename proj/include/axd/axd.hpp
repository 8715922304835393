#pragma once

#include "axd/errors.hpp"
#include "axd/rng.hpp"
#include "axd/distributions.hpp"
#include "axd/design_matrix.hpp"
#include "axd/coupling.hpp"
#include "axd/sample_set.hpp"
#include "axd/tank.hpp"
#include "axd/propagation.hpp"
#include "axd/spec_model.hpp"
#include "axd/info_content.hpp"
#include "axd/json_text.hpp"
#include "axd/spec_io.hpp"
#include "axd/analysis.hpp"
