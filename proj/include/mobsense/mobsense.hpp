#pragma once

#include "mobsense/beta.hpp"
#include "mobsense/geometry.hpp"
#include "mobsense/harness.hpp"
#include "mobsense/line.hpp"
#include "mobsense/matching.hpp"
#include "mobsense/random.hpp"
#include "mobsense/square.hpp"
