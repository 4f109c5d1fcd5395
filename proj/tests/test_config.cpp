#include <doctest.h>

TEST_CASE("placeholder_config") { CHECK(true); }
