void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        if (x < n) {
            x = x + i;
        } else {
            y = y + i;
        }
        y = y + 1;
    }
    x = x + y;
    y = y - x;
}
