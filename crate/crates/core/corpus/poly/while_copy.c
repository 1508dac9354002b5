void f(int n, int x) {
    int i;
    int y;
    i = 0;
    y = 0;
    while (i < n) {
        i = i + 1;
        y = x;
    }
}
