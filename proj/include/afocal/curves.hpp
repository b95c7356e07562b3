#pragma once

#include "afocal/curves/library.hpp"
#include "afocal/curves/planar.hpp"
#include "afocal/curves/spatial.hpp"
