#pragma once

#include "afocal/numkit/csv.hpp"
#include "afocal/numkit/curve_source.hpp"
#include "afocal/numkit/errors.hpp"
#include "afocal/numkit/finite_diff.hpp"
#include "afocal/numkit/interp.hpp"
#include "afocal/numkit/jet_curve.hpp"
#include "afocal/numkit/ode.hpp"
#include "afocal/numkit/parallel.hpp"
#include "afocal/numkit/series.hpp"
#include "afocal/numkit/series2.hpp"
#include "afocal/numkit/tolerance.hpp"
#include "afocal/numkit/vec.hpp"
#include "afocal/numkit/zeros.hpp"
