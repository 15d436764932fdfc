#pragma once

#include "merobif/continuation.hpp"
#include "merobif/cycle.hpp"
#include "merobif/errors.hpp"
#include "merobif/experiments.hpp"
#include "merobif/family.hpp"
#include "merobif/locator.hpp"
#include "merobif/orbit.hpp"
#include "merobif/render.hpp"
#include "merobif/report_json.hpp"
#include "merobif/sphere.hpp"
