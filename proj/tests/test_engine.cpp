#include <doctest.h>

TEST_CASE("placeholder_engine") { CHECK(true); }
