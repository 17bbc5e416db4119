#pragma once

#include "symdyn/catalog.hpp"
#include "symdyn/embedding.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/geometry.hpp"
#include "symdyn/io.hpp"
#include "symdyn/markers.hpp"
#include "symdyn/patterns.hpp"
#include "symdyn/quasitiling.hpp"
#include "symdyn/report.hpp"
#include "symdyn/search.hpp"
#include "symdyn/subshift.hpp"
#include "symdyn/target.hpp"
#include "symdyn/transfer.hpp"
