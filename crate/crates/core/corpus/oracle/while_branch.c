void f(int n, int x, int y) {
    while (n > 0) {
        if (x < y) {
            x = x + 1;
        } else {
            y = y + 1;
        }
        n = n - 1;
    }
    x = x + y;
}
