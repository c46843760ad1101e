/*
 * kiloscript generated Kilobot controller
 * input digest: 63da13a283c1d4b6
 * states: 7 (terminal 6), counters: 0
 * clock: 32 ticks/s, broadcast period: 500 ms
 */
#include "kilolib.h"

static uint16_t cur_state;
static uint32_t state_start_tick;

static const uint32_t STATE_TICKS[7] = {6u, 26u, 6u, 26u, 6u, 26u, 0u};

static void goto_state(uint16_t s)
{
    cur_state = s;
    state_start_tick = kilo_ticks;
    switch (s) {
    case 0u:
        set_motors(0, 0);
        set_color(RGB(3, 3, 3));
        break;
    case 1u:
        set_motors(0, 0);
        set_color(RGB(0, 0, 0));
        break;
    case 2u:
        set_motors(0, 0);
        set_color(RGB(3, 3, 3));
        break;
    case 3u:
        set_motors(0, 0);
        set_color(RGB(0, 0, 0));
        break;
    case 4u:
        set_motors(0, 0);
        set_color(RGB(3, 3, 3));
        break;
    case 5u:
        set_motors(0, 0);
        set_color(RGB(0, 0, 0));
        break;
    case 6u:  /* terminal */
        set_motors(0, 0);
        set_color(RGB(0, 0, 0));
        break;
    default:
        break;
    }
}

static void setup(void)
{
    goto_state(0u);
}

static void loop(void)
{
    uint32_t now = kilo_ticks;

    switch (cur_state) {
    case 0u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[0]) {
            goto_state(1u);
        }
        break;
    case 1u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[1]) {
            goto_state(2u);
        }
        break;
    case 2u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[2]) {
            goto_state(3u);
        }
        break;
    case 3u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[3]) {
            goto_state(4u);
        }
        break;
    case 4u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[4]) {
            goto_state(5u);
        }
        break;
    case 5u:
        if ((uint32_t)(now - state_start_tick) >= STATE_TICKS[5]) {
            goto_state(6u);
        }
        break;
    default:
        break;
    }
}

int main(void)
{
    kilo_init();
    kilo_start(setup, loop);
    return 0;
}
