#pragma once

#include "afocal/io/spec.hpp"
#include "afocal/io/writers.hpp"
