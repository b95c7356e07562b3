#pragma once

#include "afocal/darboux/surface.hpp"
#include "afocal/darboux/frame.hpp"
#include "afocal/darboux/focal.hpp"
#include "afocal/darboux/fixtures.hpp"
